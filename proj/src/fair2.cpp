#include "wgfair/fair2.hpp"

#include <algorithm>
#include <stdexcept>

namespace wgfair {

namespace {

std::string str(Obj x) { return std::to_string(x); }

void expect_equal(LawReport& r, const FunctorMap& a, const FunctorMap& b, const std::string& what) {
    ++r.checked;
    if (auto d = functor_difference(a, b); !d.empty()) r.fail(what + ": " + d);
}

void expect_functor(LawReport& r, const FunctorMap& f, const CatPtr& s, const CatPtr& t, const std::string& name) {
    ++r.checked;
    if (!f.source || f.source != s || f.target != t) {
        r.fail(name + " has the wrong source or target");
        return;
    }
    for (const auto& e : validate_functor(f)) r.fail(name + ": " + e);
}

// Edge categories and endpoint functors of a colored ordinal.
struct Edges {
    std::vector<CatPtr> cats;
    std::vector<FunctorMap> src, tgt;
};

Edges edges_of(const FairPresentation& p, const ColoredOrdinal& x) {
    Edges e;
    for (int i = 0; i + 1 < x.dots; ++i) {
        bool c = x.colored[i];
        e.cats.push_back(c ? p.U : p.A);
        e.src.push_back(c ? p.srcU : p.srcA);
        e.tgt.push_back(c ? p.srcU : p.tgtA);
    }
    return e;
}

FiberProduct edge_product(const Edges& e, const FunctorMap* gamma) {
    std::vector<FunctorMap> right, left;
    for (std::size_t i = 0; i + 1 < e.cats.size(); ++i) {
        right.push_back(gamma ? compose(*gamma, e.tgt[i]) : e.tgt[i]);
        left.push_back(gamma ? compose(*gamma, e.src[i + 1]) : e.src[i + 1]);
    }
    return chain_pullback(e.cats, right, left);
}

}  // namespace

Obj FairPresentation::compose_a(Obj f, Obj g) const {
    Obj q = pairsA.find({f, g});
    if (q < 0) throw std::logic_error("fair: arrows " + str(f) + ", " + str(g) + " not composable");
    return compA.ob[q];
}

Obj FairPresentation::compose_u(Obj x, Obj y) const {
    Obj q = pairsU.find({x, y});
    if (q < 0) throw std::logic_error("fair: units " + str(x) + ", " + str(y) + " not composable");
    return compU.ob[q];
}

void build_pairs(FairPresentation& p) {
    p.pairsA = chain_pullback({p.A, p.A}, {p.tgtA}, {p.srcA});
    p.pairsU = chain_pullback({p.U, p.U}, {p.srcU}, {p.srcU});
}

LawReport validate_presentation(const FairPresentation& p) {
    LawReport r;
    expect_functor(r, p.srcA, p.A, p.O, "srcA");
    expect_functor(r, p.tgtA, p.A, p.O, "tgtA");
    expect_functor(r, p.srcU, p.U, p.O, "srcU");
    expect_functor(r, p.u, p.U, p.A, "u");
    expect_functor(r, p.compA, p.pairsA.cat, p.A, "compA");
    expect_functor(r, p.compU, p.pairsU.cat, p.U, "compU");
    if (!r.ok()) return r;

    expect_equal(r, compose(p.srcA, p.compA), compose(p.srcA, p.pairsA.projection(0)), "source of compA");
    expect_equal(r, compose(p.tgtA, p.compA), compose(p.tgtA, p.pairsA.projection(1)), "target of compA");
    expect_equal(r, compose(p.srcU, p.compU), compose(p.srcU, p.pairsU.projection(0)), "base of compU");
    expect_equal(r, compose(p.srcA, p.u), p.srcU, "source of u");
    expect_equal(r, compose(p.tgtA, p.u), p.srcU, "target of u");
    if (!r.ok()) return r;

    // u is a semi-functor.
    auto u_pair = p.pairsA.pair_functor(
        {compose(p.u, p.pairsU.projection(0)), compose(p.u, p.pairsU.projection(1))});
    expect_equal(r, compose(p.u, p.compU), compose(p.compA, u_pair), "u does not preserve composition");

    auto assoc = [&](const FunctorMap& src, const FunctorMap& tgt, const CatPtr& E, const FiberProduct& pairs,
                     const FunctorMap& comp, const std::string& name) {
        auto triples = chain_pullback({E, E, E}, {tgt, tgt}, {src, src});
        auto pr = [&](std::size_t i) { return triples.projection(i); };
        auto first = pairs.pair_functor({pr(0), pr(1)});
        auto last = pairs.pair_functor({pr(1), pr(2)});
        auto left = pairs.pair_functor({compose(comp, first), pr(2)});
        auto right = pairs.pair_functor({pr(0), compose(comp, last)});
        expect_equal(r, compose(comp, left), compose(comp, right), name + " is not associative");
    };
    assoc(p.srcA, p.tgtA, p.A, p.pairsA, p.compA, "compA");
    assoc(p.srcU, p.srcU, p.U, p.pairsU, p.compU, "compU");
    return r;
}

FairEval::FairEval(FairPresentation p) : p_(std::move(p)) {}

const FairEval::Level& FairEval::get(const ColoredOrdinal& x) const {
    auto it = levels_.find(x);
    if (it != levels_.end()) return it->second;
    Level lv;
    lv.colored = x.colored;
    if (x.dots == 1) {
        lv.cat = p_.O;
    } else if (x.dots == 2) {
        lv.cat = x.colored[0] ? p_.U : p_.A;
    } else {
        lv.product = edge_product(edges_of(p_, x), nullptr);
        lv.cat = lv.product.cat;
    }
    return levels_.emplace(x, std::move(lv)).first->second;
}

CatPtr FairEval::level(const ColoredOrdinal& x) const { return get(x).cat; }

std::vector<Obj> FairEval::components(const ColoredOrdinal& x, Obj y) const {
    if (x.dots <= 2) return {y};
    const auto& lv = get(x);
    return std::vector<Obj>(lv.product.tuple(y), lv.product.tuple(y) + lv.product.arity);
}

Obj FairEval::assemble(const ColoredOrdinal& x, const std::vector<Obj>& parts) const {
    if (x.dots <= 2) return parts[0];
    return get(x).product.find(parts);
}

std::vector<Mor> FairEval::mor_components(const ColoredOrdinal& x, Mor m) const {
    if (x.dots <= 2) return {m};
    const auto& lv = get(x);
    std::vector<Mor> out;
    for (std::size_t i = 0; i < lv.product.arity; ++i) out.push_back(lv.product.component(m, i));
    return out;
}

Mor FairEval::assemble_mor(const ColoredOrdinal& x, const std::vector<Mor>& parts) const {
    if (x.dots <= 2) return parts[0];
    return get(x).product.find_mor(parts);
}

void FairEval::legs(const ColoredOrdinal& x, std::vector<FunctorMap>& right, std::vector<FunctorMap>& left) const {
    auto e = edges_of(p_, x);
    right.clear();
    left.clear();
    for (std::size_t i = 0; i + 1 < e.cats.size(); ++i) {
        right.push_back(e.tgt[i]);
        left.push_back(e.src[i + 1]);
    }
}

const FunctorMap& FairEval::act(const FatMap& f) const {
    auto it = acts_.find(f);
    if (it != acts_.end()) return it->second;
    if (auto err = validate_fat_map(f)) throw InputError("invalid fat map " + f.str() + ": " + *err);
    const auto& v = f.tgt;
    const auto& w = f.src;
    const auto ev = edges_of(p_, v);
    const FairPresentation& p = p_;

    auto ob = [&](Obj y) -> Obj {
        if (w.dots == 1) {
            int j = f.dotmap[0];
            if (v.dots == 1) return y;
            auto comps = components(v, y);
            return j < v.dots - 1 ? ev.src[j](comps[j]) : ev.tgt[j - 1](comps[j - 1]);
        }
        auto comps = components(v, y);
        std::vector<Obj> parts;
        for (int i = 0; i + 1 < w.dots; ++i) {
            int lo = f.dotmap[i], hi = f.dotmap[i + 1];
            Obj acc;
            if (w.colored[i]) {
                acc = comps[lo];
                for (int e = lo + 1; e < hi; ++e) acc = p.compose_u(acc, comps[e]);
            } else {
                auto as_arrow = [&](int e) { return v.colored[e] ? p.u(comps[e]) : comps[e]; };
                acc = as_arrow(lo);
                for (int e = lo + 1; e < hi; ++e) acc = p.compose_a(acc, as_arrow(e));
            }
            parts.push_back(acc);
        }
        Obj o = assemble(w, parts);
        if (o < 0) throw std::logic_error("fair action: edge components do not form a chain");
        return o;
    };
    auto mor = [&](Mor m) -> Mor {
        if (w.dots == 1) {
            int j = f.dotmap[0];
            if (v.dots == 1) return m;
            auto comps = mor_components(v, m);
            return j < v.dots - 1 ? ev.src[j].map_mor(comps[j]) : ev.tgt[j - 1].map_mor(comps[j - 1]);
        }
        auto comps = mor_components(v, m);
        std::vector<Mor> parts;
        for (int i = 0; i + 1 < w.dots; ++i) {
            int lo = f.dotmap[i], hi = f.dotmap[i + 1];
            Mor acc;
            if (w.colored[i]) {
                acc = comps[lo];
                for (int e = lo + 1; e < hi; ++e) acc = p.compU.map_mor(p.pairsU.find_mor({acc, comps[e]}));
            } else {
                auto as_arrow = [&](int e) { return v.colored[e] ? p.u.map_mor(comps[e]) : comps[e]; };
                acc = as_arrow(lo);
                for (int e = lo + 1; e < hi; ++e) acc = p.compA.map_mor(p.pairsA.find_mor({acc, as_arrow(e)}));
            }
            parts.push_back(acc);
        }
        return assemble_mor(w, parts);
    };
    auto F = FunctorMap::from_functions(level(v), level(w), ob, mor);
    return acts_.emplace(f, std::move(F)).first->second;
}

FairDiagram build_fair(const FairPresentation& p, SitePtr site) {
    if (site->kind != Site::Kind::Fat) throw std::logic_error("build_fair needs the fat site");
    auto laws = validate_presentation(p);
    if (!laws.ok()) throw LawViolation(laws.failures);
    FairDiagram d;
    d.p = p;
    auto eval = std::make_shared<FairEval>(p);
    std::vector<CatPtr> level;
    for (const auto& x : site->fat_objects) level.push_back(eval->level(x));
    std::vector<FunctorMap> act;
    act.reserve(site->num_arrows());
    for (const auto& f : site->fat) act.push_back(eval->act(f));
    d.eval = eval;
    d.diagram = strict_diagram(site, level, std::move(act));
    d.functoriality = check_strict_functoriality(d.diagram);
    return d;
}

std::vector<int> generator_arrows(const Site& s) {
    auto co = ColoredOrdinal::parse;
    std::vector<FatMap> maps{
        {co("o"), co("o=o"), {0}},         {co("o-o"), co("o=o-o"), {0, 2}}, {co("o-o"), co("o-o=o"), {0, 2}},
        {co("o=o"), co("o=o=o"), {0, 2}}, {co("o"), co("o=o"), {1}},
    };
    std::vector<int> out;
    for (const auto& m : maps) {
        int a = s.find_arrow(m);
        if (a < 0) throw InputError("window too small for the generator map " + m.str());
        out.push_back(a);
    }
    return out;
}

namespace {

void diagram_checks(FairReport& r, const PseudoDiagram& d, bool weakly_globular) {
    const Site& s = *d.site;
    const CatPtr& O = d.level[s.vertex_object()];
    ++r.discrete.checked;
    if (weakly_globular) {
        auto hd = is_homotopically_discrete(*O);
        if (!hd.hd) r.discrete.fail("O is not homotopically discrete (morphism " + std::to_string(*hd.witness) + ")");
    } else if (!O->is_discrete()) {
        r.discrete.fail("O is not discrete");
    }

    static const char* names[] = {"U -> O at the source", "U x_O A -> A", "A x_O U -> A", "U x_O U -> U",
                                  "U -> O at the target"};
    auto gens = generator_arrows(s);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        ++r.generator_maps.checked;
        auto fl = equivalence_flags(d.act[gens[i]]);
        if (!fl.is_equivalence) r.generator_maps.fail(std::string(names[i]) + ": " + fl.witness);
    }
    for (int a = 0; a < s.num_arrows(); ++a) {
        if (!pi_map(s.fat[a]).is_identity()) continue;
        ++r.vertical_maps.checked;
        auto fl = equivalence_flags(d.act[a]);
        if (!fl.is_equivalence) r.vertical_maps.fail(s.arrow_name(a) + ": " + fl.witness);
    }
    const bool hd = is_homotopically_discrete(*O).hd;
    for (int k = 0; k < s.num_objects(); ++k) {
        auto edges = s.edge_arrows(k);
        if (edges.size() < 2) continue;
        ++r.segal.checked;
        auto m = segal_map(d, k);
        if (!is_isomorphism(m.map)) r.segal.fail("Segal map of " + s.object_names[k] + " is not an isomorphism");
        if (!hd) continue;
        ++r.induced_segal.checked;
        std::vector<FunctorMap> right, left;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            right.push_back(d.act[s.vertex_arrow(s.arrows[edges[i]].src, 1)]);
            left.push_back(d.act[s.vertex_arrow(s.arrows[edges[i + 1]].src, 0)]);
        }
        auto fl = discretized_chain_flags(m.product, right, left);
        if (!fl.is_equivalence)
            r.induced_segal.fail("induced Segal map of " + s.object_names[k] + ": " + fl.witness);
    }
}

FairReport fair_checks(const FairDiagram& d, bool weakly_globular) {
    FairReport r;
    r.presentation = validate_presentation(d.p);
    if (!r.presentation.ok()) return r;
    diagram_checks(r, d.diagram, weakly_globular);
    return r;
}

}  // namespace

FairReport validate_fair2(const FairDiagram& d) { return fair_checks(d, false); }
FairReport validate_fairwg(const FairDiagram& d) { return fair_checks(d, true); }

FairReport validate_fair_diagram(const PseudoDiagram& d, bool weakly_globular) {
    if (d.site->kind != Site::Kind::Fat) throw std::logic_error("validate_fair_diagram needs the fat site");
    FairReport r;
    diagram_checks(r, d, weakly_globular);
    return r;
}

HomData fair_hom_data(const FairPresentation& p) { return {p.O, p.A, p.srcA, p.tgtA, pi1_fair(p)}; }

HomData diagram_hom_data(const PseudoDiagram& d) {
    const Site& s = *d.site;
    if (s.kind != Site::Kind::Fat) throw std::logic_error("diagram_hom_data needs the fat site");
    const int edge = s.find_object("o-o"), pair = s.find_object("o-o-o"), unit = s.find_object("o=o");
    if (edge < 0 || pair < 0 || unit < 0) throw InputError("window too small for hom data");
    HomData h;
    h.vertex = d.level[s.vertex_object()];
    h.arrow = d.level[edge];
    h.src = d.act[s.vertex_arrow(edge, 0)];
    h.tgt = d.act[s.vertex_arrow(edge, 1)];
    auto m = segal_map(d, pair);
    if (!is_isomorphism(m.map)) {
        h.pi1.problems.push_back("Segal map of o-o-o is not an isomorphism");
        return h;
    }
    std::vector<Obj> inverse(m.product.cat->num_objects());
    for (Obj x = 0; x < m.map.source->num_objects(); ++x) inverse[m.map(x)] = x;
    const FunctorMap& comp = d.act[s.find_arrow(FatMap{ColoredOrdinal::plain(1), ColoredOrdinal::plain(2), {0, 2}})];
    const FunctorMap& u = d.act[s.find_arrow(FatMap{ColoredOrdinal::plain(1), ColoredOrdinal::ze(1), {0, 1}})];
    const FunctorMap& unit_base = d.act[s.vertex_arrow(unit, 0)];
    const FinCat& V = *h.vertex;
    std::vector<Obj> unit_of_class(V.num_iso_classes(), -1);
    for (Obj x = d.level[unit]->num_objects() - 1; x >= 0; --x) unit_of_class[V.iso_class(unit_base(x))] = u(x);
    for (Obj c = 0; c < V.num_iso_classes(); ++c)
        if (unit_of_class[c] < 0) h.pi1.problems.push_back("no unit over the object class " + str(c));
    if (!h.pi1.problems.empty()) return h;
    h.pi1 = pi1_from(V, *h.arrow, h.src, h.tgt, m.product,
                     [&](Obj f, Obj g) { return comp(inverse[m.product.find({f, g})]); },
                     [&](Obj v) { return unit_of_class[V.iso_class(v)]; });
    return h;
}

Pi1 pi1_fair(const FairPresentation& p) {
    std::vector<Obj> unit_of_class(p.O->num_iso_classes(), -1);
    for (Obj x = p.U->num_objects() - 1; x >= 0; --x) unit_of_class[p.O->iso_class(p.srcU(x))] = p.u(x);
    Pi1 bad;
    for (Obj c = 0; c < p.O->num_iso_classes(); ++c)
        if (unit_of_class[c] < 0) bad.problems.push_back("no unit over the object class " + str(c));
    if (!bad.problems.empty()) return bad;
    return pi1_from(*p.O, *p.A, p.srcA, p.tgtA, p.pairsA, [&](Obj f, Obj g) { return p.compose_a(f, g); },
                    [&](Obj v) { return unit_of_class[p.O->iso_class(v)]; });
}

Subcategory hom_fiber_fair(const FairPresentation& p, Obj a, Obj b) {
    std::vector<Obj> objs;
    for (Obj f = 0; f < p.A->num_objects(); ++f)
        if (p.O->iso_class(p.srcA(f)) == a && p.O->iso_class(p.tgtA(f)) == b) objs.push_back(f);
    return full_subcategory(p.A, objs);
}

std::vector<std::string> validate_fair_morphism(const FairPresentation& x, const FairPresentation& y,
                                                const FairMorphism& f) {
    LawReport r;
    expect_functor(r, f.FO, x.O, y.O, "FO");
    expect_functor(r, f.FA, x.A, y.A, "FA");
    expect_functor(r, f.FU, x.U, y.U, "FU");
    if (!r.ok()) return r.failures;
    expect_equal(r, compose(y.srcA, f.FA), compose(f.FO, x.srcA), "source");
    expect_equal(r, compose(y.tgtA, f.FA), compose(f.FO, x.tgtA), "target");
    expect_equal(r, compose(y.srcU, f.FU), compose(f.FO, x.srcU), "unit base");
    expect_equal(r, compose(y.u, f.FU), compose(f.FA, x.u), "u");
    if (!r.ok()) return r.failures;
    auto pa = y.pairsA.pair_functor(
        {compose(f.FA, x.pairsA.projection(0)), compose(f.FA, x.pairsA.projection(1))});
    expect_equal(r, compose(f.FA, x.compA), compose(y.compA, pa), "compA");
    auto pu = y.pairsU.pair_functor(
        {compose(f.FU, x.pairsU.projection(0)), compose(f.FU, x.pairsU.projection(1))});
    expect_equal(r, compose(f.FU, x.compU), compose(y.compU, pu), "compU");
    return r.failures;
}

FairMorphism identity_fair_morphism(const FairPresentation& p) {
    return {FunctorMap::identity(p.O), FunctorMap::identity(p.A), FunctorMap::identity(p.U)};
}

TwoEquivalence is_2equivalence_fair(const FairPresentation& x, const FairPresentation& y, const FairMorphism& f) {
    return two_equivalence(fair_hom_data(x), fair_hom_data(y), f.FO, f.FA);
}

namespace {

// Endpoint normalization of a category of arrows over an hd base, mirroring
// normalize_endpoints: units go to units over the class representative.
struct FairNormal {
    std::vector<Obj> rep_o, nu, na;
};

FairNormal fair_normal(const FairPresentation& p) {
    const FinCat& O = *p.O;
    FairNormal n;
    for (Obj o = 0; o < O.num_objects(); ++o) n.rep_o.push_back(O.class_members(O.iso_class(o)).front());
    const FinCat& U = *p.U;
    for (Obj x = 0; x < U.num_objects(); ++x) {
        Obj best = -1;
        for (Obj y : U.class_members(U.iso_class(x)))
            if (p.srcU(y) == n.rep_o[p.srcU(x)]) {
                best = y;
                break;
            }
        if (best < 0) throw LawViolation({"no unit over the class representative is isomorphic to " + str(x)});
        n.nu.push_back(best);
    }
    const FinCat& A = *p.A;
    std::vector<Obj> unit_of(A.num_objects(), -1);
    for (Obj x = U.num_objects() - 1; x >= 0; --x) unit_of[p.u(x)] = x;
    for (Obj f = 0; f < A.num_objects(); ++f) {
        Obj a = n.rep_o[p.srcA(f)], b = n.rep_o[p.tgtA(f)];
        if (unit_of[f] >= 0) {
            n.na.push_back(p.u(n.nu[unit_of[f]]));
        } else if (p.srcA(f) == a && p.tgtA(f) == b) {
            n.na.push_back(f);
        } else {
            Obj best = -1;
            for (Obj h : A.class_members(A.iso_class(f)))
                if (p.srcA(h) == a && p.tgtA(h) == b) {
                    best = h;
                    break;
                }
            if (best < 0) throw LawViolation({"no arrow over the class representatives is isomorphic to " + str(f)});
            n.na.push_back(best);
        }
    }
    return n;
}

// Morphism part of a normalization: conjugate by minimal isomorphisms.
FunctorMap normal_functor(const CatPtr& c, const std::vector<Obj>& ob) {
    return FunctorMap::from_functions(
        c, c, [&](Obj x) { return ob[x]; },
        [&](Mor m) {
            Obj s = c->src(m), t = c->tgt(m);
            Mor in = min_iso(*c, ob[s], s);
            Mor out = *c->inverse(min_iso(*c, ob[t], t));
            return c->compose(out, c->compose(m, in));
        });
}

}  // namespace

DiscretizedFair discretize_fair(const FairPresentation& p, Strategy s) {
    DiscretizedFair r;
    if (p.O->is_discrete()) {
        r.p = p;
        r.comparison = identity_fair_morphism(p);
        r.identity = true;
        return r;
    }
    auto disc = discretize(p.O);
    FairPresentation q;
    q.O = disc.Xd;
    q.A = p.A;
    q.U = p.U;
    q.srcA = compose(disc.gamma, p.srcA);
    q.tgtA = compose(disc.gamma, p.tgtA);
    q.srcU = compose(disc.gamma, p.srcU);
    q.u = p.u;
    build_pairs(q);
    auto muA = q.pairsA.pair_functor({p.pairsA.projection(0), p.pairsA.projection(1)});
    auto muU = q.pairsU.pair_functor({p.pairsU.projection(0), p.pairsU.projection(1)});
    if (s == Strategy::Retraction) {
        q.compA = compose(p.compA, retraction_pseudo_inverse(muA).backward);
        q.compU = compose(p.compU, retraction_pseudo_inverse(muU).backward);
    } else {
        auto n = fair_normal(p);
        auto NA = normal_functor(p.A, n.na);
        auto NU = normal_functor(p.U, n.nu);
        auto nuA = p.pairsA.pair_functor({compose(NA, q.pairsA.projection(0)), compose(NA, q.pairsA.projection(1))});
        auto nuU = p.pairsU.pair_functor({compose(NU, q.pairsU.projection(0)), compose(NU, q.pairsU.projection(1))});
        q.compA = compose(p.compA, nuA);
        q.compU = compose(p.compU, nuU);
    }
    r.p = q;
    r.comparison = {disc.gamma, FunctorMap::identity(p.A), FunctorMap::identity(p.U)};
    return r;
}

FairPresentation fair_category_instance(const CatPtr& B) {
    FairPresentation p;
    p.O = FinCat::discrete(B->num_objects());
    p.U = p.O;
    p.A = FinCat::discrete(static_cast<Obj>(B->num_morphisms()));
    p.srcA = FunctorMap::from_functions(p.A, p.O, [&](Obj f) { return B->src(f); });
    p.tgtA = FunctorMap::from_functions(p.A, p.O, [&](Obj f) { return B->tgt(f); });
    p.srcU = FunctorMap::identity(p.O);
    p.u = FunctorMap::from_functions(p.U, p.A, [&](Obj x) { return static_cast<Obj>(B->identity(x)); });
    build_pairs(p);
    p.compA = FunctorMap::from_functions(p.pairsA.cat, p.A, [&](Obj q) {
        const Obj* t = p.pairsA.tuple(q);
        return static_cast<Obj>(B->compose(t[1], t[0]));
    });
    p.compU = FunctorMap::from_functions(p.pairsU.cat, p.U, [&](Obj q) { return p.pairsU.tuple(q)[0]; });
    return p;
}

}  // namespace wgfair
