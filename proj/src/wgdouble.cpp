#include "wgfair/wgdouble.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wgfair {

namespace {

std::string str(Obj x) { return std::to_string(x); }

FiberProduct pairs_over(const CatPtr& arrow, const FunctorMap& src, const FunctorMap& tgt, int n) {
    std::vector<CatPtr> factors(n, arrow);
    std::vector<FunctorMap> right(n - 1, tgt), left(n - 1, src);
    return chain_pullback(factors, right, left);
}

void append(std::vector<std::string>& out, const std::vector<std::string>& more, const std::string& prefix) {
    for (const auto& s : more) out.push_back(prefix + s);
}

}  // namespace

// ---------------------------------------------------------------- WGDouble

CatPtr WGDouble::level(int k) const {
    switch (k) {
        case 0: return X0;
        case 1: return X1;
        case 2: return X2.cat;
        case 3: return X3.cat;
    }
    throw std::out_of_range("WGDouble::level");
}

std::vector<Obj> WGDouble::tuple(int k, Obj x) const {
    if (k <= 1) return {x};
    const FiberProduct& p = k == 2 ? X2 : X3;
    return std::vector<Obj>(p.tuple(x), p.tuple(x) + p.arity);
}

Obj WGDouble::compose_ob(Obj f, Obj g) const {
    Obj p = X2.find({f, g});
    return p < 0 ? -1 : comp.ob[p];
}

WGDouble assemble_unchecked(const WGGenerators& g) {
    std::vector<std::string> errs;
    WGDouble x;
    x.X0 = g.X0;
    x.X1 = g.X1;
    x.d0 = g.d0;
    x.d1 = g.d1;
    x.s0 = g.s0;
    x.X2 = pairs_over(g.X1, g.d1, g.d0, 2);
    x.X3 = pairs_over(g.X1, g.d1, g.d0, 3);

    x.comp.source = x.X2.cat;
    x.comp.target = g.X1;
    for (Obj p = 0; p < x.X2.cat->num_objects(); ++p) {
        auto t = x.X2.tuple(p);
        auto it = g.comp_ob.find({t[0], t[1]});
        if (it == g.comp_ob.end()) {
            errs.push_back("no composite for the pair (" + str(t[0]) + ", " + str(t[1]) + ")");
            x.comp.ob.push_back(0);
        } else {
            x.comp.ob.push_back(it->second);
        }
    }
    if (!g.X1->is_thin()) {
        for (Mor m = 0; m < x.X2.cat->num_morphisms(); ++m) {
            auto it = g.comp_mor.find({x.X2.component(m, 0), x.X2.component(m, 1)});
            if (it == g.comp_mor.end()) {
                errs.push_back("no composite for the morphism pair " + std::to_string(m));
                x.comp.mor.push_back(0);
            } else {
                x.comp.mor.push_back(it->second);
            }
        }
    }
    if (!errs.empty()) throw LawViolation(errs);
    return x;
}

WGDouble from_generators(const WGGenerators& g) {
    std::vector<std::string> errs;
    if (!g.X0 || !g.X1) throw InputError("generators: missing level");
    if (g.X0->num_objects() == 0 && g.X1->num_objects() > 0)
        throw LawViolation({"X1 is non-empty over an empty X0"});
    auto typed = [&](const FunctorMap& f, const CatPtr& s, const CatPtr& t, const char* name) {
        if (f.source != s || f.target != t) {
            errs.push_back(std::string(name) + " has the wrong source or target");
            return;
        }
        append(errs, validate_functor(f), std::string(name) + ": ");
    };
    typed(g.d0, g.X1, g.X0, "d0");
    typed(g.d1, g.X1, g.X0, "d1");
    typed(g.s0, g.X0, g.X1, "s0");
    if (!errs.empty()) throw LawViolation(errs);
    auto id0 = FunctorMap::identity(g.X0);
    if (auto d = functor_difference(compose(g.d1, g.s0), id0); !d.empty()) errs.push_back("d1 s0 != Id: " + d);
    if (auto d = functor_difference(compose(g.d0, g.s0), id0); !d.empty()) errs.push_back("d0 s0 != Id: " + d);
    if (!errs.empty()) throw LawViolation(errs);

    WGDouble x = assemble_unchecked(g);
    append(errs, validate_functor(x.comp), "comp: ");
    if (!errs.empty()) throw LawViolation(errs);

    // Endpoints of composites.
    if (auto d = functor_difference(compose(x.d1, x.comp), compose(x.d1, x.X2.projection(0))); !d.empty())
        errs.push_back("d1 comp != d1 pr0: " + d);
    if (auto d = functor_difference(compose(x.d0, x.comp), compose(x.d0, x.X2.projection(1))); !d.empty())
        errs.push_back("d0 comp != d0 pr1: " + d);
    if (!errs.empty()) throw LawViolation(errs);

    // Units, on objects and (when X1 carries structure) on morphisms.
    const FinCat& A = *g.X1;
    for (Obj f = 0; f < A.num_objects(); ++f) {
        if (x.compose_ob(x.s0(x.d1(f)), f) != f) errs.push_back("left unit fails at " + str(f));
        if (x.compose_ob(f, x.s0(x.d0(f))) != f) errs.push_back("right unit fails at " + str(f));
    }
    if (!A.is_thin()) {
        for (Mor m = 0; m < A.num_morphisms(); ++m) {
            Mor l = x.X2.find_mor({x.s0.map_mor(x.d1.map_mor(m)), m});
            Mor r = x.X2.find_mor({m, x.s0.map_mor(x.d0.map_mor(m))});
            if (l < 0 || x.comp.map_mor(l) != m) errs.push_back("left unit fails at morphism " + std::to_string(m));
            if (r < 0 || x.comp.map_mor(r) != m) errs.push_back("right unit fails at morphism " + std::to_string(m));
        }
    }
    // Associativity on composable triples.
    for (Obj t = 0; t < x.X3.cat->num_objects(); ++t) {
        auto c = x.X3.tuple(t);
        Obj lhs = x.compose_ob(x.compose_ob(c[0], c[1]), c[2]);
        Obj rhs = x.compose_ob(c[0], x.compose_ob(c[1], c[2]));
        if (lhs != rhs)
            errs.push_back("associativity fails at (" + str(c[0]) + ", " + str(c[1]) + ", " + str(c[2]) + ")");
    }
    if (!A.is_thin()) {
        for (Mor m = 0; m < x.X3.cat->num_morphisms(); ++m) {
            Mor a = x.X3.component(m, 0), b = x.X3.component(m, 1), c = x.X3.component(m, 2);
            Mor ab = x.comp.map_mor(x.X2.find_mor({a, b}));
            Mor bc = x.comp.map_mor(x.X2.find_mor({b, c}));
            if (x.comp.map_mor(x.X2.find_mor({ab, c})) != x.comp.map_mor(x.X2.find_mor({a, bc})))
                errs.push_back("associativity fails at morphism triple " + std::to_string(m));
        }
    }
    if (errs.size() > 20) errs.resize(20);
    if (!errs.empty()) throw LawViolation(errs);

    // Simplicial identities of the nerve on the truncated site.
    static const SitePtr site = make_delta_site(3);
    auto rep = check_strict_functoriality(nerve_diagram(x, site));
    if (!rep.ok()) throw LawViolation(rep.failures);
    return x;
}

WGGenerators to_generators(const WGDouble& x) {
    WGGenerators g{x.X0, x.X1, x.d0, x.d1, x.s0, {}, {}};
    for (Obj p = 0; p < x.X2.cat->num_objects(); ++p) {
        auto t = x.X2.tuple(p);
        g.comp_ob[{t[0], t[1]}] = x.comp.ob[p];
    }
    if (!x.X1->is_thin())
        for (Mor m = 0; m < x.X2.cat->num_morphisms(); ++m)
            g.comp_mor[{x.X2.component(m, 0), x.X2.component(m, 1)}] = x.comp.mor[m];
    return g;
}

// ---------------------------------------------------------------- chains

ChainLevels chain_levels(const ChainData& c, int max_level) {
    ChainLevels lv;
    lv.level.push_back(c.vertex);
    lv.product.resize(max_level + 1);
    if (max_level >= 1) lv.level.push_back(c.arrow);
    for (int k = 2; k <= max_level; ++k) {
        lv.product[k] = pairs_over(c.arrow, c.src, c.tgt, k);
        lv.level.push_back(lv.product[k].cat);
    }
    return lv;
}

FunctorMap chain_action(const ChainData& c, const ChainLevels& lv, const SimplexMap& a) {
    const int k = a.src, r = a.tgt;
    const CatPtr& from = lv.level[r];
    const CatPtr& to = lv.level[k];

    auto components = [&](Obj y) -> std::vector<Obj> {
        if (r == 0) return {};
        if (r == 1) return {y};
        const auto* t = lv.product[r].tuple(y);
        return std::vector<Obj>(t, t + r);
    };
    auto assemble_ob = [&](const std::vector<Obj>& parts, Obj vertex0) -> Obj {
        if (k == 0) return vertex0;
        if (k == 1) return parts[0];
        Obj o = lv.product[k].find(parts);
        if (o < 0) throw std::logic_error("chain action: components do not compose to a chain");
        return o;
    };

    std::vector<Obj> ob(from->num_objects());
    for (Obj y = 0; y < from->num_objects(); ++y) {
        auto comps = components(y);
        std::vector<Obj> vertices;
        if (r == 0) {
            vertices.push_back(y);
        } else {
            for (Obj f : comps) vertices.push_back(c.src(f));
            vertices.push_back(c.tgt(comps.back()));
        }
        std::vector<Obj> parts;
        for (int j = 1; j <= k; ++j) {
            int lo = a.values[j - 1], hi = a.values[j];
            if (lo == hi) {
                parts.push_back(c.unit_ob(vertices[hi]));
                continue;
            }
            Obj acc = comps[lo];
            for (int i = lo + 1; i < hi; ++i) acc = c.comp_ob(acc, comps[i]);
            parts.push_back(acc);
        }
        ob[y] = assemble_ob(parts, vertices[a.values[0]]);
    }

    FunctorMap f;
    f.source = from;
    f.target = to;
    f.ob = std::move(ob);
    if (to->is_thin()) return f;

    f.mor.resize(from->num_morphisms());
    for (Mor m = 0; m < from->num_morphisms(); ++m) {
        std::vector<Mor> comps;
        if (r == 1) comps.push_back(m);
        for (int i = 0; r >= 2 && i < r; ++i) comps.push_back(lv.product[r].component(m, i));
        std::vector<Mor> vertices;
        if (r == 0) {
            vertices.push_back(m);
        } else {
            for (Mor g : comps) vertices.push_back(c.src.map_mor(g));
            vertices.push_back(c.tgt.map_mor(comps.back()));
        }
        std::vector<Mor> parts;
        for (int j = 1; j <= k; ++j) {
            int lo = a.values[j - 1], hi = a.values[j];
            if (lo == hi) {
                parts.push_back(c.unit_mor(vertices[hi]));
                continue;
            }
            Mor acc = comps[lo];
            for (int i = lo + 1; i < hi; ++i) acc = c.comp_mor(acc, comps[i]);
            parts.push_back(acc);
        }
        Mor out;
        if (k == 0) out = vertices[a.values[0]];
        else if (k == 1) out = parts[0];
        else out = lv.product[k].find_mor(parts);
        if (out < 0) throw std::logic_error("chain action: morphism components do not form a chain");
        f.mor[m] = out;
    }
    return f;
}

PseudoDiagram chain_diagram(const ChainData& c, SitePtr site) {
    if (site->kind != Site::Kind::Delta) throw std::logic_error("chain_diagram needs the simplex site");
    auto lv = chain_levels(c, site->num_objects() - 1);
    std::vector<FunctorMap> act;
    act.reserve(site->num_arrows());
    for (const auto& a : site->simplex) act.push_back(chain_action(c, lv, a));
    return strict_diagram(site, lv.level, std::move(act));
}

ChainData nerve_chain(const WGDouble& x) {
    ChainData c;
    c.vertex = x.X0;
    c.arrow = x.X1;
    c.src = x.d1;
    c.tgt = x.d0;
    // Copies keep the closures valid independently of x's lifetime.
    auto X2 = x.X2;
    auto comp = x.comp;
    c.comp_ob = [X2, comp](Obj f, Obj g) {
        Obj p = X2.find({f, g});
        if (p < 0) throw std::logic_error("nerve: pair not composable");
        return comp.ob[p];
    };
    c.comp_mor = [X2, comp](Mor f, Mor g) { return comp.map_mor(X2.find_mor({f, g})); };
    auto s0 = x.s0;
    c.unit_ob = [s0](Obj v) { return s0(v); };
    c.unit_mor = [s0](Mor m) { return s0.map_mor(m); };
    return c;
}

PseudoDiagram nerve_diagram(const WGDouble& x, SitePtr site) { return chain_diagram(nerve_chain(x), site); }

// ---------------------------------------------------------------- Segal maps

SegalMaps segal_maps(const WGDouble& x) {
    SegalMaps s;
    // X2 and X3 are the fiber products over X0 themselves.
    s.mu2 = FunctorMap::identity(x.X2.cat);
    s.mu3 = FunctorMap::identity(x.X3.cat);
    auto disc = discretize(x.X0);
    auto src = compose(disc.gamma, x.d1), tgt = compose(disc.gamma, x.d0);
    s.over_discrete2 = pairs_over(x.X1, src, tgt, 2);
    s.over_discrete3 = pairs_over(x.X1, src, tgt, 3);
    s.mu_hat2 = s.over_discrete2.pair_functor({x.X2.projection(0), x.X2.projection(1)});
    s.mu_hat3 = s.over_discrete3.pair_functor({x.X3.projection(0), x.X3.projection(1), x.X3.projection(2)});
    return s;
}

CatWG2Report validate_catwg2(const WGDouble& x) {
    CatWG2Report r;
    auto hd = is_homotopically_discrete(*x.X0);
    r.homotopically_discrete = hd.hd;
    if (!hd.hd) {
        r.witnesses.push_back("X0 has a non-invertible or parallel morphism " + std::to_string(*hd.witness));
        return r;
    }
    // X2 and X3 are built as the strict fiber products, so the Segal maps are identities.
    r.segal_isos = true;
    auto f2 = discretized_chain_flags(x.X2, {x.d0}, {x.d1});
    auto f3 = discretized_chain_flags(x.X3, {x.d0, x.d0}, {x.d1, x.d1});
    r.induced_equivalences = f2.is_equivalence && f3.is_equivalence;
    if (!f2.is_equivalence) r.witnesses.push_back("induced Segal map at level 2: " + f2.witness);
    if (!f3.is_equivalence) r.witnesses.push_back("induced Segal map at level 3: " + f3.witness);
    return r;
}

// ---------------------------------------------------------------- π1

Pi1 pi1_from(const FinCat& vertex, const FinCat& arrow, const FunctorMap& src, const FunctorMap& tgt,
             const FiberProduct& pairs, const std::function<Obj(Obj, Obj)>& comp_ob,
             const std::function<Obj(Obj)>& unit_ob) {
    Pi1 p;
    const Obj nO = vertex.num_iso_classes();
    const Obj nA = arrow.num_iso_classes();
    std::vector<Obj> s(nA), t(nA);
    for (Obj c = 0; c < nA; ++c) {
        Obj f = arrow.class_members(c).front();
        s[c] = vertex.iso_class(src(f));
        t[c] = vertex.iso_class(tgt(f));
    }
    std::vector<Mor> ident(nO);
    for (Obj o = 0; o < nO; ++o) {
        Obj u = unit_ob(vertex.class_members(o).front());
        ident[o] = arrow.iso_class(u);
        if (s[ident[o]] != o || t[ident[o]] != o) p.problems.push_back("unit of class " + str(o) + " is not an endo-arrow");
    }
    std::map<std::pair<Obj, Obj>, Obj> table;  // (g class, f class) -> class of g after f
    std::set<std::pair<Obj, Obj>> realized;
    for (Obj q = 0; q < pairs.cat->num_objects(); ++q) {
        const Obj* tp = pairs.tuple(q);
        Obj cf = arrow.iso_class(tp[0]), cg = arrow.iso_class(tp[1]);
        Obj h = arrow.iso_class(comp_ob(tp[0], tp[1]));
        auto [it, fresh] = table.emplace(std::make_pair(cg, cf), h);
        if (!fresh && it->second != h)
            p.problems.push_back("composition of classes " + str(cf) + " then " + str(cg) + " is not well defined");
        realized.insert({cf, cg});
    }
    for (Obj f = 0; f < nA; ++f)
        for (Obj g = 0; g < nA; ++g)
            if (t[f] == s[g] && !table.count({g, f}))
                p.problems.push_back("classes " + str(f) + " then " + str(g) +
                                     " have no strictly composable representatives");
    // Segal condition on classes: iso classes of pairs match composable class pairs.
    if (static_cast<std::size_t>(pairs.cat->num_iso_classes()) != realized.size())
        p.problems.push_back("iso classes of composable pairs are not determined by the classes of their components");
    if (!p.problems.empty()) return p;

    std::vector<Obj> src_v(s.begin(), s.end()), tgt_v(t.begin(), t.end());
    std::vector<std::array<Mor, 3>> comp;
    for (const auto& [k, v] : table) comp.push_back({k.first, k.second, v});
    try {
        p.cat = FinCat::make_explicit(nO, src_v, tgt_v, ident, comp);
        auto rep = validate_category(*p.cat);
        append(p.problems, rep.structural, "");
        append(p.problems, rep.laws, "");
    } catch (const std::exception& e) {
        p.problems.push_back(std::string("pi1 is not a category: ") + e.what());
    }
    if (!p.problems.empty()) p.cat.reset();
    return p;
}

Pi1 pi1_double(const WGDouble& x) {
    return pi1_from(*x.X0, *x.X1, x.d1, x.d0, x.X2, [&](Obj f, Obj g) { return x.compose_ob(f, g); },
                    [&](Obj v) { return x.s0(v); });
}

namespace {

Subcategory arrow_fiber(const CatPtr& vertex, const CatPtr& arrow, const FunctorMap& src, const FunctorMap& tgt,
                        Obj a, Obj b) {
    std::vector<Obj> objs;
    for (Obj f = 0; f < arrow->num_objects(); ++f)
        if (vertex->iso_class(src(f)) == a && vertex->iso_class(tgt(f)) == b) objs.push_back(f);
    return full_subcategory(arrow, objs);
}

}  // namespace

Subcategory hom_fiber(const WGDouble& x, Obj a, Obj b) { return arrow_fiber(x.X0, x.X1, x.d1, x.d0, a, b); }

// ---------------------------------------------------------------- morphisms

std::vector<std::string> validate_wg_morphism(const WGDouble& x, const WGDouble& y, const WGMorphism& f) {
    std::vector<std::string> errs;
    if (f.F0.source != x.X0 || f.F0.target != y.X0 || f.F1.source != x.X1 || f.F1.target != y.X1) {
        errs.push_back("level functors have the wrong source or target");
        return errs;
    }
    append(errs, validate_functor(f.F0), "F0: ");
    append(errs, validate_functor(f.F1), "F1: ");
    if (!errs.empty()) return errs;
    if (auto d = functor_difference(compose(y.d0, f.F1), compose(f.F0, x.d0)); !d.empty())
        errs.push_back("d0 F1 != F0 d0: " + d);
    if (auto d = functor_difference(compose(y.d1, f.F1), compose(f.F0, x.d1)); !d.empty())
        errs.push_back("d1 F1 != F0 d1: " + d);
    if (auto d = functor_difference(compose(f.F1, x.s0), compose(y.s0, f.F0)); !d.empty())
        errs.push_back("F1 s0 != s0 F0: " + d);
    if (!errs.empty()) return errs;
    for (Obj p = 0; p < x.X2.cat->num_objects(); ++p) {
        auto t = x.X2.tuple(p);
        if (f.F1(x.comp.ob[p]) != y.compose_ob(f.F1(t[0]), f.F1(t[1])))
            errs.push_back("composition not preserved at (" + str(t[0]) + ", " + str(t[1]) + ")");
    }
    if (!y.X1->is_thin())
        for (Mor m = 0; m < x.X2.cat->num_morphisms(); ++m) {
            Mor img = y.X2.find_mor({f.F1.map_mor(x.X2.component(m, 0)), f.F1.map_mor(x.X2.component(m, 1))});
            if (f.F1.map_mor(x.comp.map_mor(m)) != y.comp.map_mor(img))
                errs.push_back("composition not preserved at morphism " + std::to_string(m));
        }
    return errs;
}

WGMorphism compose(const WGMorphism& g, const WGMorphism& f) { return {compose(g.F0, f.F0), compose(g.F1, f.F1)}; }

WGMorphism identity_morphism(const WGDouble& x) {
    return {FunctorMap::identity(x.X0), FunctorMap::identity(x.X1)};
}

HomData hom_data(const WGDouble& x) { return {x.X0, x.X1, x.d1, x.d0, pi1_double(x)}; }

FunctorMap pi1_functor(const HomData& x, const HomData& y, const FunctorMap& on_vertex, const FunctorMap& on_arrow) {
    if (!x.pi1.cat || !y.pi1.cat) throw InputError("pi1 functor: a pi1 category is undefined");
    FunctorMap f;
    f.source = x.pi1.cat;
    f.target = y.pi1.cat;
    for (Obj o = 0; o < x.vertex->num_iso_classes(); ++o) {
        std::set<Obj> imgs;
        for (Obj v : x.vertex->class_members(o)) imgs.insert(y.vertex->iso_class(on_vertex(v)));
        if (imgs.size() != 1) throw InputError("pi1 functor: object map not well defined");
        f.ob.push_back(*imgs.begin());
    }
    if (!f.target->is_thin()) {
        for (Obj c = 0; c < x.arrow->num_iso_classes(); ++c) {
            std::set<Obj> imgs;
            for (Obj a : x.arrow->class_members(c)) imgs.insert(y.arrow->iso_class(on_arrow(a)));
            if (imgs.size() != 1) throw InputError("pi1 functor: morphism map not well defined");
            f.mor.push_back(*imgs.begin());
        }
    }
    auto errs = validate_functor(f);
    if (!errs.empty()) throw InputError("pi1 functor: " + errs.front());
    return f;
}

TwoEquivalence two_equivalence(const HomData& x, const HomData& y, const FunctorMap& on_vertex,
                               const FunctorMap& on_arrow) {
    TwoEquivalence r;
    r.fibers = true;
    const Obj n = x.vertex->num_iso_classes();
    std::vector<Obj> cls(n);
    for (Obj a = 0; a < n; ++a) cls[a] = y.vertex->iso_class(on_vertex(x.vertex->class_members(a).front()));
    for (Obj a = 0; a < n && r.fibers; ++a)
        for (Obj b = 0; b < n && r.fibers; ++b) {
            auto sx = arrow_fiber(x.vertex, x.arrow, x.src, x.tgt, a, b);
            auto sy = arrow_fiber(y.vertex, y.arrow, y.src, y.tgt, cls[a], cls[b]);
            auto fl = equivalence_flags(restrict_functor(on_arrow, sx, sy));
            if (!fl.is_equivalence) {
                r.fibers = false;
                r.witness = "hom fiber over classes (" + str(a) + ", " + str(b) + "): " + fl.witness;
            }
        }
    try {
        auto p = pi1_functor(x, y, on_vertex, on_arrow);
        auto fl = equivalence_flags(p);
        r.pi1_equivalence = fl.is_equivalence;
        std::vector<bool> hit(y.pi1.cat->num_iso_classes(), false);
        for (Obj o : p.ob) hit[y.pi1.cat->iso_class(o)] = true;
        r.pi1_object_classes_surjective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
        if (!fl.is_equivalence && r.witness.empty()) r.witness = "pi1: " + fl.witness;
    } catch (const InputError& e) {
        if (r.witness.empty()) r.witness = e.what();
    }
    return r;
}

TwoEquivalence is_2equivalence_double(const WGDouble& x, const WGDouble& y, const WGMorphism& f) {
    return two_equivalence(hom_data(x), hom_data(y), f.F0, f.F1);
}

// ---------------------------------------------------------------- D2

D2Result d2_construction(const WGDouble& x, SitePtr site) {
    auto disc = discretize(x.X0);
    auto chain = nerve_chain(x);
    auto lv = chain_levels(chain, site->num_objects() - 1);
    std::vector<CatPtr> level = lv.level;
    level[0] = disc.Xd;
    std::vector<FunctorMap> act;
    for (const auto& a : site->simplex) {
        auto f = chain_action(chain, lv, a);
        if (a.src == 0) f = compose(disc.gamma, f);
        if (a.tgt == 0) f = compose(f, disc.gamma_prime);
        act.push_back(std::move(f));
    }
    D2Result r;
    r.diagram = strict_diagram(site, level, std::move(act));
    for (int k = 0; k < site->num_objects(); ++k) {
        r.comparison.push_back(k == 0 ? disc.gamma : FunctorMap::identity(level[k]));
        r.flags.push_back(equivalence_flags(r.comparison.back()));
    }
    // Faces of [1] are gamma d_i and its degeneracy is s0 gamma'.
    auto check = [&](const FunctorMap& a, const FunctorMap& b, const std::string& what) {
        ++r.defining_equations.checked;
        if (auto d = functor_difference(a, b); !d.empty()) r.defining_equations.fail(what + ": " + d);
    };
    if (site->num_objects() > 1) {
        check(r.diagram.act[site->find_arrow(SimplexMap{0, 1, {0}})], compose(disc.gamma, x.d1), "source face");
        check(r.diagram.act[site->find_arrow(SimplexMap{0, 1, {1}})], compose(disc.gamma, x.d0), "target face");
        check(r.diagram.act[site->find_arrow(SimplexMap{1, 0, {0, 0}})], compose(x.s0, disc.gamma_prime),
              "degeneracy");
    }
    check(compose(disc.gamma, disc.gamma_prime), FunctorMap::identity(disc.Xd), "gamma gamma'");
    r.semi_simplicial = check_strict_functoriality(r.diagram, [&](int a) { return site->is_mono(a); });
    r.coherence = check_pseudo_coherence(r.diagram);
    return r;
}

// ---------------------------------------------------------------- cleavages

LawReport validate_cleavage(const WGDouble& x, const Cleavage& c) {
    LawReport r;
    const FinCat& V = *x.X0;
    const FinCat& A = *x.X1;
    auto get = [&](Obj f, Obj v) -> Obj {
        auto it = c.transport.find({f, v});
        return it == c.transport.end() ? -1 : it->second;
    };
    for (const auto& [key, h] : c.transport) {
        auto [f, v] = key;
        ++r.checked;
        if (f < 0 || f >= A.num_objects() || v < 0 || v >= V.num_objects() || h < 0 || h >= A.num_objects()) {
            r.fail("transport entry out of range");
            continue;
        }
        if (V.iso_class(v) != V.iso_class(x.d1(f))) r.fail("transport of " + str(f) + " to a non-isomorphic source");
        if (x.d1(h) != v) r.fail("transport of " + str(f) + " to " + str(v) + " has the wrong source");
        if (x.d0(h) != x.d0(f)) r.fail("transport of " + str(f) + " changes the target");
        if (A.iso_class(h) != A.iso_class(f)) r.fail("transport of " + str(f) + " is not isomorphic to it");
    }
    for (Obj f = 0; f < A.num_objects(); ++f) {
        for (Obj v : V.class_members(V.iso_class(x.d1(f)))) {
            ++r.checked;
            Obj h = get(f, v);
            if (h < 0) {
                r.fail("no transport of " + str(f) + " to " + str(v));
                continue;
            }
            for (Obj w : V.class_members(V.iso_class(v)))
                if (get(h, w) != get(f, w)) r.fail("transport of " + str(f) + " is not compatible with composites of isos");
        }
        if (get(f, x.d1(f)) != f) r.fail("transport of " + str(f) + " along the identity moves it");
    }
    for (Obj p = 0; p < x.X2.cat->num_objects(); ++p) {
        auto t = x.X2.tuple(p);
        for (Obj v : V.class_members(V.iso_class(x.d1(t[0])))) {
            ++r.checked;
            Obj lhs = get(x.comp.ob[p], v), h = get(t[0], v);
            Obj rhs = h < 0 ? -1 : x.compose_ob(h, t[1]);
            if (lhs < 0 || lhs != rhs)
                r.fail("transport does not commute with composition at (" + str(t[0]) + ", " + str(t[1]) + ")");
        }
    }
    return r;
}

Strategy parse_strategy(const std::string& s) {
    if (s == "cleavage") return Strategy::Cleavage;
    if (s == "retraction") return Strategy::Retraction;
    throw InputError("unknown strategy '" + s + "' (expected cleavage or retraction)");
}

std::string strategy_name(Strategy s) { return s == Strategy::Cleavage ? "cleavage" : "retraction"; }

Normalization normalize_endpoints(const WGDouble& x) {
    const FinCat& V = *x.X0;
    const FinCat& A = *x.X1;
    auto hd = is_homotopically_discrete(V);
    if (!hd.hd) throw InputError("normalization needs a homotopically discrete X0");
    Normalization n;
    n.rep.resize(V.num_objects());
    for (Obj v = 0; v < V.num_objects(); ++v) n.rep[v] = V.class_members(V.iso_class(v)).front();

    std::vector<Obj> unit_of(A.num_objects(), -1);
    for (Obj v = V.num_objects() - 1; v >= 0; --v) unit_of[x.s0(v)] = v;

    n.N.source = x.X1;
    n.N.target = x.X1;
    n.N.ob.resize(A.num_objects());
    n.lambda.resize(A.num_objects());
    for (Obj f = 0; f < A.num_objects(); ++f) {
        Obj a = n.rep[x.d1(f)], b = n.rep[x.d0(f)];
        if (unit_of[f] >= 0) {
            Obj v = unit_of[f];
            n.N.ob[f] = x.s0(n.rep[v]);
            n.lambda[f] = x.s0.map_mor(V.thin_hom(n.rep[v], v));
        } else if (x.d1(f) == a && x.d0(f) == b) {
            n.N.ob[f] = f;
            n.lambda[f] = A.identity(f);
        } else {
            Obj best = -1;
            for (Obj h : A.class_members(A.iso_class(f)))
                if (x.d1(h) == a && x.d0(h) == b) {
                    best = h;
                    break;
                }
            if (best < 0)
                throw LawViolation({"no arrow over the class representatives is isomorphic to " + str(f)});
            n.N.ob[f] = best;
            n.lambda[f] = min_iso(A, best, f);
        }
    }
    if (!A.is_thin()) {
        n.N.mor.resize(A.num_morphisms());
        for (Mor m = 0; m < A.num_morphisms(); ++m) {
            Obj s = A.src(m), t = A.tgt(m);
            Mor back = *A.inverse(n.lambda[t]);
            n.N.mor[m] = A.compose(back, A.compose(m, n.lambda[s]));
        }
    }
    return n;
}

FunctorMap class_minimum(const WGDouble& x) {
    const FinCat& A = *x.X1;
    const FinCat& V = *x.X0;
    std::vector<Obj> vertex_min(V.num_iso_classes(), -1);
    for (Obj v = V.num_objects() - 1; v >= 0; --v) vertex_min[V.iso_class(v)] = v;
    std::vector<Obj> chosen(A.num_iso_classes(), -1);
    for (Obj f = A.num_objects() - 1; f >= 0; --f) chosen[A.iso_class(f)] = f;
    for (Obj v : vertex_min) chosen[A.iso_class(x.s0(v))] = x.s0(v);
    std::vector<Mor> to(A.num_objects());
    for (Obj f = 0; f < A.num_objects(); ++f) to[f] = min_iso(A, chosen[A.iso_class(f)], f);
    return FunctorMap::from_functions(
        x.X1, x.X1, [&](Obj f) { return chosen[A.iso_class(f)]; },
        [&](Mor m) { return A.compose(*A.inverse(to[A.tgt(m)]), A.compose(m, to[A.src(m)])); });
}

Retraction unit_preserving_retraction(const WGDouble& x, const FunctorMap& mu_hat, const FiberProduct& over) {
    const FinCat& B = *mu_hat.target;
    const FinCat& A = *mu_hat.source;
    const std::size_t k = over.factors.size();
    std::vector<Obj> pre(B.num_objects(), -1);
    for (Obj a = 0; a < A.num_objects(); ++a) pre[mu_hat.ob[a]] = a;
    std::vector<Obj> class_min(B.num_iso_classes(), -1);
    for (Obj a = A.num_objects() - 1; a >= 0; --a) class_min[B.iso_class(mu_hat.ob[a])] = a;
    std::vector<Obj> unit_of(x.X1->num_objects(), -1);
    for (Obj v = 0; v < x.X0->num_objects(); ++v) unit_of[x.s0(v)] = v;

    std::vector<Obj> G(B.num_objects());
    std::vector<Mor> eps(B.num_objects());
    for (Obj b = 0; b < B.num_objects(); ++b) {
        if (pre[b] >= 0) {
            G[b] = pre[b];
            eps[b] = B.identity(b);
            continue;
        }
        const Obj* t = over.tuple(b);
        bool units = true;
        for (std::size_t i = 0; i < k; ++i) units = units && unit_of[t[i]] >= 0;
        G[b] = class_min[B.iso_class(b)];
        if (units) {
            Obj q = over.find(std::vector<Obj>(k, t[0]));
            if (q >= 0 && pre[q] >= 0 && B.iso_class(q) == B.iso_class(b)) G[b] = pre[q];
        }
        eps[b] = min_iso(B, mu_hat.ob[G[b]], b);
    }
    return retraction_with_choice(mu_hat, std::move(G), std::move(eps));
}

DiscreteComposition discrete_composition(const WGDouble& x, Strategy s) {
    DiscreteComposition r;
    r.disc = discretize(x.X0);
    auto src = compose(r.disc.gamma, x.d1), tgt = compose(r.disc.gamma, x.d0);
    r.pairs = pairs_over(x.X1, src, tgt, 2);
    r.mu_hat2 = r.pairs.pair_functor({x.X2.projection(0), x.X2.projection(1)});
    if (s == Strategy::Retraction) {
        r.nu2 = unit_preserving_retraction(x, r.mu_hat2, r.pairs).backward;
    } else {
        try {
            r.norm = normalize_endpoints(x);
        } catch (const LawViolation&) {
            // No arrow over the representatives in some class: send every
            // composite to a fixed object of its class instead.
            r.nu2 = unit_preserving_retraction(x, r.mu_hat2, r.pairs).backward;
            r.compA = compose(class_minimum(x), compose(x.comp, r.nu2));
            return r;
        }
        const auto& N = r.norm->N;
        r.nu2.source = r.pairs.cat;
        r.nu2.target = x.X2.cat;
        for (Obj p = 0; p < r.pairs.cat->num_objects(); ++p) {
            const Obj* t = r.pairs.tuple(p);
            Obj q = x.X2.find({N(t[0]), N(t[1])});
            if (q < 0) throw std::logic_error("normalized arrows are not composable");
            r.nu2.ob.push_back(q);
        }
        if (!x.X2.cat->is_thin())
            for (Mor m = 0; m < r.pairs.cat->num_morphisms(); ++m)
                r.nu2.mor.push_back(
                    x.X2.find_mor({N.map_mor(r.pairs.component(m, 0)), N.map_mor(r.pairs.component(m, 1))}));
    }
    r.compA = compose(x.comp, r.nu2);
    return r;
}

Tr2Result tr2_strong_segalic(const WGDouble& x, Strategy s, SitePtr site) {
    Tr2Result r;
    r.composition = discrete_composition(x, s);
    const auto& dc = r.composition;
    ChainData& c = r.chain;
    c.vertex = dc.disc.Xd;
    c.arrow = x.X1;
    c.src = compose(dc.disc.gamma, x.d1);
    c.tgt = compose(dc.disc.gamma, x.d0);
    auto pairs = dc.pairs;
    auto compA = dc.compA;
    c.comp_ob = [pairs, compA](Obj f, Obj g) {
        Obj p = pairs.find({f, g});
        if (p < 0) throw std::logic_error("tr2: arrows not composable over the discretization");
        return compA.ob[p];
    };
    c.comp_mor = [pairs, compA](Mor f, Mor g) { return compA.map_mor(pairs.find_mor({f, g})); };
    auto unit = compose(x.s0, dc.disc.gamma_prime);
    c.unit_ob = [unit](Obj v) { return unit(v); };
    c.unit_mor = [unit](Mor m) { return unit.map_mor(m); };

    r.diagram = chain_diagram(c, site);
    r.semi_simplicial = check_strict_functoriality(r.diagram, [&](int a) { return site->is_mono(a); });
    r.coherence = check_pseudo_coherence(r.diagram);
    r.segal = check_segal_isos(r.diagram);

    auto triples = pairs_over(x.X1, c.src, c.tgt, 3);
    for (Obj t = 0; t < triples.cat->num_objects(); ++t) {
        const Obj* u = triples.tuple(t);
        ++r.associativity.checked;
        Obj lhs = c.comp_ob(c.comp_ob(u[0], u[1]), u[2]);
        Obj rhs = c.comp_ob(u[0], c.comp_ob(u[1], u[2]));
        if (lhs != rhs)
            r.associativity.fail("(" + str(u[0]) + ", " + str(u[1]) + ", " + str(u[2]) + "): " + str(lhs) +
                                 " vs " + str(rhs));
    }
    ++r.retraction.checked;
    if (auto d = functor_difference(compose(dc.nu2, dc.mu_hat2), FunctorMap::identity(x.X2.cat)); !d.empty())
        r.retraction.fail("nu2 mu_hat2 != Id: " + d);
    return r;
}

FunctorMap tr2_component(const WGDouble& x, const Tr2Result& tx, const WGDouble& y, const Tr2Result& ty,
                         const WGMorphism& f, int k) {
    const auto& from = tx.diagram.level[k];
    const auto& to = ty.diagram.level[k];
    if (k == 0) {
        const auto& dx = tx.composition.disc;
        const auto& dy = ty.composition.disc;
        return compose(dy.gamma, compose(f.F0, dx.gamma_prime));
    }
    if (k == 1) return f.F1;
    auto px = pairs_over(x.X1, tx.chain.src, tx.chain.tgt, k);
    auto py = pairs_over(y.X1, ty.chain.src, ty.chain.tgt, k);
    return FunctorMap::from_functions(
        from, to,
        [&](Obj o) {
            std::vector<Obj> t(px.tuple(o), px.tuple(o) + k);
            for (auto& e : t) e = f.F1(e);
            Obj q = py.find(t);
            if (q < 0) throw std::logic_error("tr2 component: image is not a chain");
            return q;
        },
        [&](Mor m) {
            std::vector<Mor> t;
            for (int i = 0; i < k; ++i) t.push_back(f.F1.map_mor(px.component(m, i)));
            return py.find_mor(t);
        });
}

LawReport tr2_naturality(const WGDouble& x, const Tr2Result& tx, const WGDouble& y, const Tr2Result& ty,
                         const WGMorphism& f) {
    LawReport r;
    const Site& s = *tx.diagram.site;
    std::vector<FunctorMap> comp;
    for (int k = 0; k < s.num_objects(); ++k) comp.push_back(tr2_component(x, tx, y, ty, f, k));
    for (int a = 0; a < s.num_arrows(); ++a) {
        if (!s.is_mono(a)) continue;
        ++r.checked;
        int k = s.arrows[a].src, n = s.arrows[a].tgt;
        auto d = functor_difference(compose(ty.diagram.act[a], comp[n]), compose(comp[k], tx.diagram.act[a]));
        if (!d.empty()) r.fail(s.arrow_name(a) + ": " + d);
    }
    return r;
}

// ---------------------------------------------------------------- examples

SurjectionInstance generate_from_surjection(const CatPtr& B, const std::vector<Obj>& t) {
    SurjectionInstance s;
    s.B = B;
    s.t = t;
    std::vector<bool> hit(B->num_objects(), false);
    for (Obj b : t) {
        if (b < 0 || b >= B->num_objects()) throw InputError("surjection: value outside the base");
        hit[b] = true;
    }
    for (Obj b = 0; b < B->num_objects(); ++b)
        if (!hit[b]) throw InputError("surjection: object " + str(b) + " of the base is not hit");
    const Obj n = static_cast<Obj>(t.size());
    std::vector<std::vector<Obj>> fiber(B->num_objects());
    for (Obj x = 0; x < n; ++x) fiber[t[x]].push_back(x);

    std::vector<std::int64_t> labels;
    for (Mor beta = 0; beta < B->num_morphisms(); ++beta)
        for (Obj a : fiber[B->src(beta)])
            for (Obj b : fiber[B->tgt(beta)]) {
                s.index[{a, beta, b}] = static_cast<Obj>(s.objects.size());
                s.objects.push_back({a, beta, b});
                labels.push_back(beta);
            }
    WGGenerators g;
    g.X0 = FinCat::make_equivalence(std::vector<std::int64_t>(t.begin(), t.end()));
    g.X1 = FinCat::make_equivalence(labels);
    auto at = [&](std::size_t i) -> const std::tuple<Obj, Mor, Obj>& { return s.objects[i]; };
    g.d1 = FunctorMap::from_functions(g.X1, g.X0, [&](Obj f) { return std::get<0>(at(f)); });
    g.d0 = FunctorMap::from_functions(g.X1, g.X0, [&](Obj f) { return std::get<2>(at(f)); });
    g.s0 = FunctorMap::from_functions(g.X0, g.X1, [&](Obj x) { return s.index.at({x, B->identity(t[x]), x}); });
    for (std::size_t i = 0; i < s.objects.size(); ++i) {
        auto [a, beta, b] = s.objects[i];
        for (Mor beta2 : B->out(t[b]))
            for (Obj c : fiber[B->tgt(beta2)])
                g.comp_ob[{static_cast<Obj>(i), s.index.at({b, beta2, c})}] =
                    s.index.at({a, B->compose(beta2, beta), c});
    }
    s.x = from_generators(g);
    for (std::size_t i = 0; i < s.objects.size(); ++i) {
        auto [a, beta, b] = s.objects[i];
        for (Obj v : fiber[t[a]]) s.cleavage.transport[{static_cast<Obj>(i), v}] = s.index.at({v, beta, b});
    }
    return s;
}

WGDouble category_instance(const CatPtr& B) {
    std::vector<Obj> t(B->num_objects());
    for (Obj b = 0; b < B->num_objects(); ++b) t[b] = b;
    return generate_from_surjection(B, t).x;
}

WGDouble terminal_double() { return category_instance(FinCat::terminal()); }

WGGenerators micro_counterexample() {
    WGGenerators g;
    g.X0 = FinCat::chaotic(2);
    g.X1 = FinCat::terminal();
    g.d1 = FunctorMap::from_functions(g.X1, g.X0, [](Obj) { return 0; });
    g.d0 = FunctorMap::from_functions(g.X1, g.X0, [](Obj) { return 1; });
    g.s0 = FunctorMap::from_functions(g.X0, g.X1, [](Obj) { return 0; });
    return g;
}

WGDouble cyclic_double() {
    WGGenerators g;
    g.X0 = FinCat::terminal();
    g.X1 = cyclic_group_category(2);
    g.d0 = FunctorMap::from_functions(g.X1, g.X0, [](Obj) { return 0; });
    g.d1 = g.d0;
    g.s0 = FunctorMap::from_functions(g.X0, g.X1, [](Obj) { return 0; }, [&](Mor) { return g.X1->identity(0); });
    g.comp_ob[{0, 0}] = 0;
    for (Mor a = 0; a < 2; ++a)
        for (Mor b = 0; b < 2; ++b) g.comp_mor[{a, b}] = g.X1->compose(b, a);
    return from_generators(g);
}

WGMorphism collapse_to_base(const SurjectionInstance& s, const WGDouble& base) {
    WGMorphism f;
    f.F0 = FunctorMap::from_functions(s.x.X0, base.X0, [&](Obj x) { return s.t[x]; });
    f.F1 = FunctorMap::from_functions(s.x.X1, base.X1, [&](Obj a) {
        auto b = static_cast<Obj>(std::get<1>(s.objects[a]));
        return b;
    });
    auto errs = validate_wg_morphism(s.x, base, f);
    if (!errs.empty()) throw std::logic_error("collapse is not a morphism: " + errs.front());
    return f;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RandomInstance generate_random_wg(std::uint64_t seed, const GenBounds& bounds) {
    std::uint64_t state = seed;
    std::mt19937_64 rng(splitmix64(state));
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int attempt = 0; attempt < 1000; ++attempt) {
        CatPtr B;
        std::ostringstream desc;
        switch (pick(0, 2)) {
            case 0: {
                Obj n = pick(1, 3);
                std::vector<std::pair<Obj, Obj>> gens;
                for (Obj a = 0; a < n; ++a)
                    for (Obj b = a + 1; b < n; ++b)
                        if (pick(0, 1)) gens.push_back({a, b});
                B = poset_category(n, gens);
                desc << "poset on " << n << " elements with " << gens.size() << " generating relations";
                break;
            }
            case 1: {
                Obj n = pick(1, 3);
                B = cyclic_group_category(n);
                desc << "cyclic group of order " << n;
                break;
            }
            default: {
                Obj n = pick(1, 3);
                B = FinCat::discrete(n);
                desc << "discrete category on " << n << " objects";
                break;
            }
        }
        std::vector<Obj> fib(B->num_objects());
        for (auto& k : fib) k = pick(1, 3);
        long long objs = 0, mors = 0;
        for (Mor beta = 0; beta < B->num_morphisms(); ++beta) {
            long long c = static_cast<long long>(fib[B->src(beta)]) * fib[B->tgt(beta)];
            objs += c;
            mors += c * c;
        }
        if (objs > bounds.max_objects || mors > bounds.max_morphisms) continue;
        std::vector<Obj> t;
        desc << ", fibers";
        for (Obj b = 0; b < B->num_objects(); ++b) {
            desc << ' ' << fib[b];
            for (Obj i = 0; i < fib[b]; ++i) t.push_back(b);
        }
        return {generate_from_surjection(B, t), desc.str()};
    }
    return {generate_from_surjection(FinCat::terminal(), {0}), "terminal (no draw within bounds)"};
}

}  // namespace wgfair
