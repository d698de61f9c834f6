#include "wgfair/comparison.hpp"

#include <stdexcept>

namespace wgfair {

namespace {

std::vector<int> plain_positions(const ColoredOrdinal& u) {
    std::vector<int> out;
    for (int i = 0; i + 1 < u.dots; ++i)
        if (!u.colored[i]) out.push_back(i);
    return out;
}

template <typename T>
std::vector<T> pick(const std::vector<T>& v, const std::vector<int>& at) {
    std::vector<T> out;
    for (int i : at) out.push_back(v[i]);
    return out;
}

int delta_arrow(const Site& delta, const SimplexMap& m) {
    int a = delta.find_arrow(m);
    if (a < 0) throw InputError("simplex site too small for " + m.str());
    return a;
}

void check_equal(LawReport& r, const FunctorMap& a, const FunctorMap& b, const std::string& what) {
    ++r.checked;
    if (auto d = functor_difference(a, b); !d.empty()) r.fail(what + ": " + d);
}

}  // namespace

Nerve make_nerve(const WGDouble& x, SitePtr delta_site) {
    if (delta_site->kind != Site::Kind::Delta) throw std::logic_error("make_nerve needs the simplex site");
    Nerve n;
    n.chain = nerve_chain(x);
    n.levels = chain_levels(n.chain, delta_site->num_objects() - 1);
    std::vector<FunctorMap> act;
    act.reserve(delta_site->num_arrows());
    for (const auto& a : delta_site->simplex) act.push_back(chain_action(n.chain, n.levels, a));
    n.diagram = strict_diagram(delta_site, n.levels.level, std::move(act));
    return n;
}

// ---------------------------------------------------------------- chain strictifier

ChainStrictifier::ChainStrictifier(const WGDouble& x, const DiscreteComposition& dc, Strategy s, const Nerve& n)
    : nerve_(n.levels.product) {
    if (s == Strategy::Cleavage && dc.norm) {
        norm_ = *dc.norm;
        return;
    }
    auto sm = segal_maps(x);
    strict_ = {FiberProduct{}, FiberProduct{}, x.X2, x.X3};
    over_discrete_ = {FiberProduct{}, FiberProduct{}, sm.over_discrete2, sm.over_discrete3};
    backward_ = {FunctorMap{}, FunctorMap{}, unit_preserving_retraction(x, sm.mu_hat2, sm.over_discrete2).backward,
                 unit_preserving_retraction(x, sm.mu_hat3, sm.over_discrete3).backward};
}

Obj ChainStrictifier::ob(const std::vector<Obj>& chain) const {
    const std::size_t k = chain.size();
    if (k == 1) return chain[0];
    if (k < 2 || k >= nerve_.size() || k > 3) throw std::logic_error("chain length outside the supported range");
    std::vector<Obj> strict(k);
    if (norm_) {
        for (std::size_t i = 0; i < k; ++i) strict[i] = norm_->N(chain[i]);
    } else {
        Obj q = over_discrete_[k].find(chain);
        if (q < 0) throw std::logic_error("chain is not composable over the discretization");
        const Obj* t = strict_[k].tuple(backward_[k](q));
        strict.assign(t, t + k);
    }
    Obj o = nerve_[k].find(strict);
    if (o < 0) throw std::logic_error("strictified chain is not composable");
    return o;
}

Mor ChainStrictifier::mor(const std::vector<Mor>& chain) const {
    const std::size_t k = chain.size();
    if (k == 1) return chain[0];
    if (k < 2 || k >= nerve_.size() || k > 3) throw std::logic_error("chain length outside the supported range");
    std::vector<Mor> strict(k);
    if (norm_) {
        for (std::size_t i = 0; i < k; ++i) strict[i] = norm_->N.map_mor(chain[i]);
    } else {
        Mor m = backward_[k].map_mor(over_discrete_[k].find_mor(chain));
        for (std::size_t i = 0; i < k; ++i) strict[i] = strict_[k].component(m, i);
    }
    return nerve_[k].find_mor(strict);
}

// ---------------------------------------------------------------- F2

FairPresentation f2_presentation(const WGDouble& x, const DiscreteComposition& dc, Strategy s) {
    FairPresentation p;
    p.O = dc.disc.Xd;
    p.A = x.X1;
    p.U = x.X0;
    p.srcA = compose(dc.disc.gamma, x.d1);
    p.tgtA = compose(dc.disc.gamma, x.d0);
    p.srcU = dc.disc.gamma;
    p.u = x.s0;
    p.pairsA = dc.pairs;
    p.compA = dc.compA;
    p.pairsU = chain_pullback({p.U, p.U}, {p.srcU}, {p.srcU});
    std::vector<Obj> rep;
    if (s == Strategy::Cleavage) {
        const FinCat& V = *x.X0;
        std::vector<Obj> class_min(V.num_iso_classes(), -1);
        for (Obj v = V.num_objects() - 1; v >= 0; --v) class_min[V.iso_class(v)] = v;
        for (Obj v = 0; v < V.num_objects(); ++v) rep.push_back(class_min[V.iso_class(v)]);
    }
    const auto& pairsU = p.pairsU;
    const CatPtr& U = p.U;
    p.compU = FunctorMap::from_functions(
        pairsU.cat, U,
        [&](Obj q) {
            Obj first = pairsU.tuple(q)[0];
            return rep.empty() ? first : rep[first];
        },
        [&](Mor m) {
            if (rep.empty()) return pairsU.component(m, 0);
            return U->identity(rep[pairsU.tuple(pairsU.cat->src(m))[0]]);
        });
    return p;
}

F2Result F2(const WGDouble& x, Strategy s, SitePtr fat_site) {
    F2Result r;
    r.composition = discrete_composition(x, s);
    r.fair = build_fair(f2_presentation(x, r.composition, s), std::move(fat_site));
    return r;
}

F2Checks check_F2(const WGDouble& x, const F2Result& f) {
    F2Checks c;
    const auto& p = f.fair.p;
    c.fair = validate_fair2(f.fair);
    auto px = pi1_double(x);
    auto pf = pi1_fair(p);
    if (!px.cat || !pf.cat) {
        c.pi1_witness = !px.problems.empty() ? "pi1 X: " + px.problems.front()
                                             : "pi1 F2X: " + (pf.problems.empty() ? "missing" : pf.problems.front());
    } else if (px.cat->num_objects() != pf.cat->num_objects() ||
               px.cat->num_morphisms() != pf.cat->num_morphisms()) {
        c.pi1_witness = "pi1 X and pi1 F2X differ in size";
    } else {
        auto F = FunctorMap::from_functions(
            px.cat, pf.cat, [](Obj o) { return o; }, [](Mor m) { return m; });
        auto errs = validate_functor(F);
        if (!errs.empty()) c.pi1_witness = "identity on classes is not a functor: " + errs.front();
        else if (!is_isomorphism(F)) c.pi1_witness = "identity on classes is not an isomorphism";
        else c.pi1_isomorphic = true;
    }
    const Obj n = x.X0->num_iso_classes();
    for (Obj a = 0; a < n; ++a)
        for (Obj b = 0; b < n; ++b) {
            ++c.hom_fibers.checked;
            auto hx = hom_fiber(x, a, b);
            auto hf = hom_fiber_fair(p, a, b);
            if (hx.index != hf.index)
                c.hom_fibers.fail("fiber over (" + std::to_string(a) + ", " + std::to_string(b) + ") differs");
        }
    return c;
}

FairMorphism F2_morphism(const F2Result& fx, const F2Result& fy, const WGMorphism& f) {
    const auto& dx = fx.composition.disc;
    const auto& dy = fy.composition.disc;
    FairMorphism m;
    m.FO = FunctorMap::from_functions(dx.Xd, dy.Xd, [&](Obj c) { return dy.gamma(f.F0(dx.gamma_prime(c))); });
    m.FA = f.F1;
    m.FU = f.F0;
    return m;
}

// ---------------------------------------------------------------- pi*

FairPresentation pi_star(const WGDouble& x) {
    FairPresentation p;
    p.O = x.X0;
    p.A = x.X1;
    p.U = x.X0;
    p.srcA = x.d1;
    p.tgtA = x.d0;
    p.srcU = FunctorMap::identity(x.X0);
    p.u = x.s0;
    p.pairsA = x.X2;
    p.compA = x.comp;
    p.pairsU = chain_pullback({x.X0, x.X0}, {p.srcU}, {p.srcU});
    p.compU = p.pairsU.projection(0);
    return p;
}

LawReport check_pi_star(const FairDiagram& d, const Nerve& n) {
    LawReport r;
    const Site& s = *d.diagram.site;
    const Site& delta = *n.diagram.site;
    const FairEval& ev = *d.eval;
    std::vector<FunctorMap> drop(s.num_objects());
    for (int k = 0; k < s.num_objects(); ++k) {
        const auto& u = s.fat_objects[k];
        const auto plain = plain_positions(u);
        const int rank = static_cast<int>(plain.size());
        if (rank >= static_cast<int>(n.levels.level.size())) throw InputError("simplex site too small for " + u.str());
        const auto& prod = n.levels.product;
        drop[k] = FunctorMap::from_functions(
            d.diagram.level[k], n.levels.level[rank],
            [&](Obj y) {
                if (u.dots == 1) return y;
                auto c = ev.components(u, y);
                if (rank == 0) return c[0];
                if (rank == 1) return c[plain[0]];
                return prod[rank].find(pick(c, plain));
            },
            [&](Mor m) {
                if (u.dots == 1) return m;
                auto c = ev.mor_components(u, m);
                if (rank == 0) return c[0];
                if (rank == 1) return c[plain[0]];
                return prod[rank].find_mor(pick(c, plain));
            });
        ++r.checked;
        if (!is_isomorphism(drop[k])) r.fail(u.str() + ": dropping the colored components is not an isomorphism");
    }
    if (!r.ok()) return r;
    for (int a = 0; a < s.num_arrows(); ++a) {
        int b = delta_arrow(delta, pi_map(s.fat[a]));
        check_equal(r, compose(n.diagram.act[b], drop[s.arrows[a].tgt]),
                    compose(drop[s.arrows[a].src], d.diagram.act[a]), s.arrow_name(a));
    }
    return r;
}

PseudoDiagram tilde_pi_star(const Nerve& n, const Discretization& disc, SitePtr fat_site) {
    const Site& s = *fat_site;
    const Site& delta = *n.diagram.site;
    std::vector<CatPtr> level;
    for (const auto& u : s.fat_objects) {
        int rank = u.rank();
        if (rank >= static_cast<int>(n.levels.level.size())) throw InputError("simplex site too small for " + u.str());
        level.push_back(u.dots == 1 ? disc.Xd : n.levels.level[rank]);
    }
    std::vector<FunctorMap> act;
    act.reserve(s.num_arrows());
    for (int a = 0; a < s.num_arrows(); ++a) {
        const auto& f = s.fat[a];
        if (f.tgt.dots == 1) {
            act.push_back(FunctorMap::identity(disc.Xd));
            continue;
        }
        const auto& base = n.diagram.act[delta_arrow(delta, pi_map(f))];
        act.push_back(f.src.dots == 1 ? compose(disc.gamma, base) : base);
    }
    return strict_diagram(std::move(fat_site), std::move(level), std::move(act));
}

// ---------------------------------------------------------------- S2

namespace {

S2Result s2_maps(const WGDouble& x, const F2Result& f, const ChainStrictifier& cs, const Nerve& n) {
    S2Result r;
    const Site& s = *f.fair.diagram.site;
    r.target = tilde_pi_star(n, f.composition.disc, f.fair.diagram.site);
    const FairEval& ev = *f.fair.eval;
    for (int k = 0; k < s.num_objects(); ++k) {
        const auto& u = s.fat_objects[k];
        const CatPtr& from = f.fair.diagram.level[k];
        const CatPtr& to = r.target.level[k];
        if (u.dots == 1) {
            r.S.push_back(FunctorMap::identity(from));
            r.z.push_back(FunctorMap::identity(from));
            continue;
        }
        const auto plain = plain_positions(u);
        const int rank = static_cast<int>(plain.size());
        const FiberProduct* chains = rank >= 2 ? &n.levels.product[rank] : nullptr;
        r.S.push_back(FunctorMap::from_functions(
            from, to,
            [&](Obj y) {
                auto c = ev.components(u, y);
                return rank == 0 ? c[0] : cs.ob(pick(c, plain));
            },
            [&](Mor m) {
                auto c = ev.mor_components(u, m);
                return rank == 0 ? c[0] : cs.mor(pick(c, plain));
            }));
        r.z.push_back(FunctorMap::from_functions(
            to, from,
            [&](Obj w) {
                std::vector<Obj> arrows;
                if (rank == 1) arrows = {w};
                if (rank >= 2) arrows.assign(chains->tuple(w), chains->tuple(w) + rank);
                auto vertex = [&](int c) {
                    if (rank == 0) return w;
                    return c < rank ? x.d1(arrows[c]) : x.d0(arrows[rank - 1]);
                };
                std::vector<Obj> parts;
                for (int i = 0, j = 0; i + 1 < u.dots; ++i)
                    parts.push_back(u.colored[i] ? vertex(u.class_of(i)) : arrows[j++]);
                Obj o = ev.assemble(u, parts);
                if (o < 0) throw std::logic_error("z: inserted vertices do not form a chain");
                return o;
            },
            [&](Mor m) {
                std::vector<Mor> arrows;
                if (rank == 1) arrows = {m};
                if (rank >= 2)
                    for (int i = 0; i < rank; ++i) arrows.push_back(chains->component(m, i));
                auto vertex = [&](int c) {
                    if (rank == 0) return m;
                    return c < rank ? x.d1.map_mor(arrows[c]) : x.d0.map_mor(arrows[rank - 1]);
                };
                std::vector<Mor> parts;
                for (int i = 0, j = 0; i + 1 < u.dots; ++i)
                    parts.push_back(u.colored[i] ? vertex(u.class_of(i)) : arrows[j++]);
                return ev.assemble_mor(u, parts);
            }));
        if (rank < 2) continue;
        // S as a retraction of z: inverse of z on its image, the strictified chain elsewhere.
        const FunctorMap& zk = r.z.back();
        std::vector<Obj> back = r.S.back().ob;
        for (Obj w = 0; w < to->num_objects(); ++w) back[zk(w)] = w;
        std::vector<Mor> counit(from->num_objects());
        for (Obj y = 0; y < from->num_objects(); ++y) counit[y] = min_iso(*from, zk(back[y]), y);
        r.S.back() = retraction_with_choice(zk, std::move(back), std::move(counit)).backward;
    }
    return r;
}

}  // namespace

S2Result S2(const WGDouble& x, const F2Result& f, Strategy strategy, const Nerve& n) {
    ChainStrictifier cs(x, f.composition, strategy, n);
    S2Result r = s2_maps(x, f, cs, n);
    const Site& s = *f.fair.diagram.site;
    const auto& F = f.fair.diagram;
    for (int k = 0; k < s.num_objects(); ++k) {
        const auto& name = s.object_names[k];
        check_equal(r.section, compose(r.S[k], r.z[k]), FunctorMap::identity(r.target.level[k]), name);
        ++r.equivalences.checked;
        auto fs = equivalence_flags(r.S[k]);
        auto fz = equivalence_flags(r.z[k]);
        if (!fs.is_equivalence) r.equivalences.fail(name + ": S is not an equivalence: " + fs.witness);
        if (!fz.is_equivalence || !fz.injective_on_objects)
            r.equivalences.fail(name + ": z is not an injective equivalence" +
                                (fz.witness.empty() ? std::string() : ": " + fz.witness));
    }
    std::vector<FunctorMap> phi(s.num_arrows());
    for (int a = 0; a < s.num_arrows(); ++a) {
        const int src = s.arrows[a].src, tgt = s.arrows[a].tgt;
        check_equal(r.naturality, compose(r.S[src], F.act[a]), compose(r.target.act[a], r.S[tgt]), s.arrow_name(a));
        phi[a] = compose(r.z[src], compose(r.target.act[a], r.S[tgt]));
    }
    for (int a = 0; a < s.num_arrows(); ++a)
        for (int b : s.out[s.arrows[a].tgt])
            check_equal(r.transported, phi[s.compose(b, a)], compose(phi[a], phi[b]),
                        s.arrow_name(b) + " after " + s.arrow_name(a));
    return r;
}

// ---------------------------------------------------------------- alpha, beta

AlphaBeta alphabeta(const FairEval& y, const ColoredOrdinal& u) {
    const auto& p = y.presentation();
    if (!p.O->is_discrete()) throw InputError("alpha and beta need a discrete object category");
    AlphaBeta ab;
    ab.object = u;
    ab.plain = ColoredOrdinal::plain(u.rank());
    const CatPtr Yu = y.level(u);
    const CatPtr Yp = y.level(ab.plain);
    if (u.is_plain()) {
        ab.alpha = FunctorMap::identity(Yu);
        ab.beta = ab.alpha;
        return ab;
    }
    std::vector<Obj> sigma(p.O->num_objects(), -1);
    for (Obj x = p.U->num_objects() - 1; x >= 0; --x) sigma[p.srcU(x)] = x;
    const auto plain = plain_positions(u);
    const int rank = static_cast<int>(plain.size());

    ab.beta = FunctorMap::from_functions(
        Yu, Yp,
        [&](Obj w) {
            auto c = y.components(u, w);
            return rank == 0 ? p.srcU(c[0]) : y.assemble(ab.plain, pick(c, plain));
        },
        [&](Mor m) {
            auto c = y.mor_components(u, m);
            return rank == 0 ? p.srcU.map_mor(c[0]) : y.assemble_mor(ab.plain, pick(c, plain));
        });

    auto vertices = [&](Obj w) {
        std::vector<Obj> v;
        if (rank == 0) return std::vector<Obj>{w};
        auto c = y.components(ab.plain, w);
        for (int i = 0; i < rank; ++i) v.push_back(p.srcA(c[i]));
        v.push_back(p.tgtA(c[rank - 1]));
        return v;
    };
    auto unit_at = [&](Obj o) {
        if (sigma[o] < 0) throw LawViolation({"no unit over object " + std::to_string(o)});
        return sigma[o];
    };
    ab.alpha = FunctorMap::from_functions(
        Yp, Yu,
        [&](Obj w) {
            auto v = vertices(w);
            std::vector<Obj> arrows = rank == 0 ? std::vector<Obj>{} : y.components(ab.plain, w);
            std::vector<Obj> parts;
            for (int i = 0, j = 0; i + 1 < u.dots; ++i)
                parts.push_back(u.colored[i] ? unit_at(v[u.class_of(i)]) : arrows[j++]);
            Obj o = y.assemble(u, parts);
            if (o < 0) throw std::logic_error("alpha: inserted units do not form a chain");
            return o;
        },
        [&](Mor m) {
            auto v = vertices(Yp->src(m));
            std::vector<Mor> arrows = rank == 0 ? std::vector<Mor>{} : y.mor_components(ab.plain, m);
            std::vector<Mor> parts;
            for (int i = 0, j = 0; i + 1 < u.dots; ++i)
                parts.push_back(u.colored[i] ? p.U->identity(unit_at(v[u.class_of(i)])) : arrows[j++]);
            return y.assemble_mor(u, parts);
        });
    return ab;
}

AlphaBetaCheck check_alphabeta(const FairEval& y, const AlphaBeta& ab) {
    AlphaBetaCheck c;
    const CatPtr Yu = y.level(ab.object);
    const CatPtr Yp = y.level(ab.plain);
    auto d = functor_difference(compose(ab.beta, ab.alpha), FunctorMap::identity(Yp));
    c.beta_alpha_identity = d.empty();
    if (!d.empty()) c.witness = "beta alpha: " + d;
    c.alpha_beta_iso = true;
    for (Obj w = 0; w < Yu->num_objects(); ++w)
        if (Yu->iso_class(ab.alpha(ab.beta(w))) != Yu->iso_class(w)) {
            c.alpha_beta_iso = false;
            if (c.witness.empty()) c.witness = "alpha beta of " + std::to_string(w) + " is not isomorphic to it";
            break;
        }
    c.alpha = equivalence_flags(ab.alpha);
    c.beta = equivalence_flags(ab.beta);
    return c;
}

// ---------------------------------------------------------------- T2

T2Result T2(const FairDiagram& y, SitePtr delta_site) {
    if (!y.eval) throw std::logic_error("T2 needs an evaluated fair diagram");
    if (!y.p.O->is_discrete()) throw InputError("T2 needs a fair 2-category with discrete objects");
    const FairEval& ev = *y.eval;
    const Site& ds = *delta_site;
    const Site& fs = *y.diagram.site;
    T2Result r;

    std::map<ColoredOrdinal, AlphaBeta> cache;
    auto ab = [&](const ColoredOrdinal& u) -> const AlphaBeta& {
        auto it = cache.find(u);
        if (it == cache.end()) it = cache.emplace(u, alphabeta(ev, u)).first;
        return it->second;
    };
    auto transported = [&](const FatMap& F) { return compose(ab(F.src).beta, compose(ev.act(F), ab(F.tgt).alpha)); };

    std::vector<CatPtr> level;
    for (int k = 0; k < ds.num_objects(); ++k) level.push_back(ev.level(ColoredOrdinal::plain(k)));
    std::vector<FunctorMap> act;
    for (int a = 0; a < ds.num_arrows(); ++a) {
        r.lift.push_back(lift_string({ds.simplex[a]}).front());
        act.push_back(transported(r.lift.back()));
    }

    std::vector<std::vector<int>> by_image(ds.num_arrows());
    for (int b = 0; b < fs.num_arrows(); ++b) {
        int a = ds.find_arrow(pi_map(fs.fat[b]));
        if (a >= 0) by_image[a].push_back(b);
    }
    for (int a = 0; a < ds.num_arrows(); ++a) {
        const auto& lifts = by_image[a];
        bool canonical_listed = false;
        for (int b : lifts) canonical_listed = canonical_listed || fs.fat[b] == r.lift[a];
        if (lifts.size() + (canonical_listed ? 0 : 1) < 2) continue;
        ++r.arrows_with_several_lifts;
        for (int b : lifts) {
            if (fs.fat[b] == r.lift[a]) continue;
            ++r.lift_independence.checked;
            auto d = functor_difference(transported(fs.fat[b]), act[a]);
            if (!d.empty())
                r.lift_independence.fail(ds.arrow_name(a) + ": lift " + fs.fat[b].str() + " differs from " +
                                         r.lift[a].str() + ": " + d);
        }
    }

    r.diagram = strict_diagram(delta_site, std::move(level), std::move(act));
    r.coherence = check_pseudo_coherence(r.diagram);
    r.mono_strict = check_strict_functoriality(r.diagram, [&](int a) { return ds.is_mono(a); });
    r.segal = check_segal_isos(r.diagram);
    return r;
}

// ---------------------------------------------------------------- St and R2

InducedMap induced_map(const PseudoDiagram& H, const StrictificationResult& st, const PseudoDiagram& X,
                       const std::vector<FunctorMap>& t) {
    const Site& s = *H.site;
    InducedMap m;
    for (int k = 0; k < s.num_objects(); ++k) {
        const CatPtr& Lk = st.L.level[k];
        const CatPtr& Xk = X.level[k];
        auto ob = [&](Obj o) {
            auto [a, y] = st.free_objects[k][o];
            return X.act[a](t[s.arrows[a].tgt](y));
        };
        bool identity_cells = true;
        std::function<Mor(Mor)> mor;
        if (!Xk->is_thin())
            mor = [&](Mor l) {
                Obj x0 = Lk->src(l), x1 = Lk->tgt(l);
                if (t[k](st.h[k].ob[x0]) != ob(x0) || t[k](st.h[k].ob[x1]) != ob(x1)) identity_cells = false;
                return t[k].map_mor(st.g[k].map_mor(l));
            };
        m.w.push_back(FunctorMap::from_functions(Lk, Xk, ob, mor));
        ++m.well_defined.checked;
        if (!identity_cells)
            m.well_defined.fail(s.object_names[k] + ": the comparison in a non-thin level is not an identity");
        auto errs = validate_functor(m.w.back());
        if (!errs.empty()) m.well_defined.fail(s.object_names[k] + ": " + errs.front());
    }
    if (!m.well_defined.ok()) return m;
    for (int b = 0; b < s.num_arrows(); ++b) {
        const int j = s.arrows[b].src, k = s.arrows[b].tgt;
        check_equal(m.naturality, compose(X.act[b], m.w[k]), compose(m.w[j], st.L.act[b]), s.arrow_name(b));
    }
    for (int k = 0; k < s.num_objects(); ++k) {
        ++m.equivalences.checked;
        auto fl = equivalence_flags(m.w[k]);
        if (!fl.is_equivalence) m.equivalences.fail(s.object_names[k] + ": " + fl.witness);
    }
    return m;
}

LawReport check_g_naturality(const PseudoDiagram& H, const StrictificationResult& st) {
    LawReport r;
    const Site& s = *H.site;
    for (int b = 0; b < s.num_arrows(); ++b) {
        const int j = s.arrows[b].src, k = s.arrows[b].tgt;
        check_equal(r, compose(H.act[b], st.g[k]), compose(st.g[j], st.L.act[b]), s.arrow_name(b));
    }
    return r;
}

R2Result R2(const FairDiagram& y, SitePtr delta_site) {
    const Site& s = *delta_site;
    if (s.num_objects() < 3) throw InputError("R2 needs simplices up to dimension 2");
    R2Result r;
    r.t2 = T2(y, delta_site);
    r.st = strictify(r.t2.diagram);
    r.checks = check_strictification(r.t2.diagram, r.st);
    const auto& L = r.st.L;
    const Site& s2 = *L.site;
    WGGenerators g;
    g.X0 = L.level[0];
    g.X1 = L.level[1];
    g.d0 = L.act[delta_arrow(s2, SimplexMap{0, 1, {1}})];
    g.d1 = L.act[delta_arrow(s2, SimplexMap{0, 1, {0}})];
    g.s0 = L.act[delta_arrow(s2, SimplexMap{1, 0, {0, 0}})];
    const FunctorMap& outer = L.act[delta_arrow(s2, SimplexMap{1, 2, {0, 2}})];
    auto sm = segal_map(L, 2);
    if (!is_isomorphism(sm.map)) {
        r.problems.push_back("Segal map of the strictification at level 2 is not an isomorphism");
        return r;
    }
    std::vector<Obj> inverse(sm.product.cat->num_objects());
    for (Obj o = 0; o < L.level[2]->num_objects(); ++o) inverse[sm.map(o)] = o;
    for (Obj q = 0; q < sm.product.cat->num_objects(); ++q) {
        const Obj* t = sm.product.tuple(q);
        g.comp_ob[{t[0], t[1]}] = outer(inverse[q]);
    }
    if (!g.X1->is_thin())
        for (Mor l = 0; l < L.level[2]->num_morphisms(); ++l) {
            Mor pm = sm.map.map_mor(l);
            g.comp_mor[{sm.product.component(pm, 0), sm.product.component(pm, 1)}] = outer.map_mor(l);
        }
    try {
        r.x = from_generators(g);
        r.report = validate_catwg2(*r.x);
    } catch (const LawViolation& e) {
        r.problems = e.witnesses;
    }
    return r;
}

// ---------------------------------------------------------------- round trips

RoundTripX roundtrip_x(const WGDouble& x, Strategy s, SitePtr delta_site, SitePtr fat_site) {
    RoundTripX r;
    try {
        r.f2 = F2(x, s, fat_site);
        r.r2 = R2(r.f2->fair, delta_site);
        if (!r.r2->x) {
            r.error = "R2 F2 X is not a double category: " +
                      (r.r2->problems.empty() ? std::string("unknown") : r.r2->problems.front());
            return r;
        }
        const auto& H = r.r2->t2.diagram;
        Nerve n = make_nerve(x, H.site);
        ChainStrictifier cs(x, r.f2->composition, s, n);
        const FairEval& ev = *r.f2->fair.eval;
        std::vector<FunctorMap> t;
        t.push_back(r.f2->composition.disc.gamma_prime);
        t.push_back(FunctorMap::identity(x.X1));
        for (int k = 2; k < static_cast<int>(H.level.size()); ++k) {
            auto plain = ColoredOrdinal::plain(k);
            t.push_back(FunctorMap::from_functions(
                H.level[k], n.levels.level[k], [&](Obj y) { return cs.ob(ev.components(plain, y)); },
                [&](Mor m) { return cs.mor(ev.mor_components(plain, m)); }));
        }
        r.map = induced_map(H, r.r2->st, n.diagram, t);
        if (!r.map.well_defined.ok()) return r;
        WGMorphism m{r.map.w[0], r.map.w[1]};
        r.morphism_problems = validate_wg_morphism(*r.r2->x, x, m);
        if (r.morphism_problems.empty()) r.two_equivalence = is_2equivalence_double(*r.r2->x, x, m);
    } catch (const LawViolation& e) {
        r.error = std::string("law violation: ") + e.what();
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

RoundTripY roundtrip_y(const FairDiagram& y, Strategy s, SitePtr delta_site, SitePtr fat_site) {
    RoundTripY r;
    try {
        r.r2 = R2(y, delta_site);
        if (!r.r2->x) {
            r.error = "R2 Y is not a double category: " +
                      (r.r2->problems.empty() ? std::string("unknown") : r.r2->problems.front());
            return r;
        }
        const WGDouble& rx = *r.r2->x;
        r.z = F2(rx, s, fat_site);
        const auto& Z = r.z->fair.diagram;
        Nerve n = make_nerve(rx, delta_site);
        ChainStrictifier cs(rx, r.z->composition, s, n);
        auto maps = s2_maps(rx, *r.z, cs, n);
        const FairEval& ye = *y.eval;
        const auto& G = r.r2->st.g;
        const Site& fs = *fat_site;

        // Nerve of R2 Y at level k back to Y at the plain k-simplex, through g.
        std::vector<FunctorMap> back;
        back.push_back(G[0]);
        back.push_back(G[1]);
        for (int k = 2; k < static_cast<int>(n.levels.level.size()); ++k) {
            const auto& chains = n.levels.product[k];
            auto plain = ColoredOrdinal::plain(k);
            back.push_back(FunctorMap::from_functions(
                n.levels.level[k], ye.level(plain),
                [&](Obj w) {
                    std::vector<Obj> parts;
                    for (int i = 0; i < k; ++i) parts.push_back(G[1](chains.tuple(w)[i]));
                    Obj o = ye.assemble(plain, parts);
                    if (o < 0) throw std::logic_error("g does not preserve composable chains");
                    return o;
                },
                [&](Mor m) {
                    std::vector<Mor> parts;
                    for (int i = 0; i < k; ++i) parts.push_back(G[1].map_mor(chains.component(m, i)));
                    return ye.assemble_mor(plain, parts);
                }));
        }
        for (int k = 0; k < fs.num_objects(); ++k) {
            const auto& u = fs.fat_objects[k];
            if (u.dots == 1) {
                r.t.push_back(compose(G[0], r.z->composition.disc.gamma_prime));
            } else {
                auto ab = alphabeta(ye, u);
                r.t.push_back(compose(ab.alpha, compose(back[u.rank()], maps.S[k])));
            }
            ++r.t_equivalences.checked;
            auto fl = equivalence_flags(r.t.back());
            if (!fl.is_equivalence) r.t_equivalences.fail(fs.object_names[k] + ": " + fl.witness);
        }

        r.st = strictify(Z);
        r.st_checks = check_strictification(Z, *r.st);
        r.st_fairwg = validate_fair_diagram(r.st->L, true);
        r.g_natural = check_g_naturality(Z, *r.st);
        r.map = induced_map(Z, *r.st, y.diagram, r.t);
        auto hd = diagram_hom_data(r.st->L);
        const int o = fs.vertex_object(), edge = fs.find_object("o-o");
        r.leg_to_z = two_equivalence(hd, fair_hom_data(r.z->fair.p), r.st->g[o], r.st->g[edge]);
        if (r.map.well_defined.ok())
            r.leg_to_y = two_equivalence(hd, fair_hom_data(y.p), r.map.w[o], r.map.w[edge]);
    } catch (const LawViolation& e) {
        r.error = std::string("law violation: ") + e.what();
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

}  // namespace wgfair
