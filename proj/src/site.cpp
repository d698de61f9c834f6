#include "wgfair/site.hpp"

#include <algorithm>
#include <stdexcept>

namespace wgfair {

namespace {

std::uint64_t pair_key(int g, int f) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(g)) << 32) |
           static_cast<std::uint32_t>(f);
}

void finish_site(Site& s) {
    s.out.assign(s.num_objects(), {});
    s.in.assign(s.num_objects(), {});
    for (int a = 0; a < s.num_arrows(); ++a) {
        s.out[s.arrows[a].src].push_back(a);
        s.in[s.arrows[a].tgt].push_back(a);
    }
}

std::string where(const Site& s, int f, int g) {
    return s.arrow_name(g) + " after " + s.arrow_name(f);
}

}  // namespace

int Site::compose(int g, int f) const {
    auto it = comp_index.find(pair_key(g, f));
    if (it == comp_index.end()) throw std::logic_error("site: arrows not composable");
    return it->second;
}

std::string Site::arrow_name(int a) const {
    return kind == Kind::Delta ? simplex[a].str() : fat[a].str();
}

int Site::find_object(const std::string& name) const {
    for (int i = 0; i < num_objects(); ++i)
        if (object_names[i] == name) return i;
    return -1;
}

int Site::find_arrow(const SimplexMap& m) const {
    auto it = simplex_index.find(m);
    return it == simplex_index.end() ? -1 : it->second;
}

int Site::find_arrow(const FatMap& m) const {
    auto it = fat_index.find(m);
    return it == fat_index.end() ? -1 : it->second;
}

bool Site::is_mono(int a) const { return kind == Kind::Delta ? simplex[a].is_mono() : true; }

int Site::vertex_object() const { return 0; }

std::vector<int> Site::edge_arrows(int object) const {
    std::vector<int> r;
    if (kind == Kind::Delta) {
        for (int j = 1; j <= object; ++j) r.push_back(find_arrow(SimplexMap{1, object, {j - 1, j}}));
    } else {
        const auto& x = fat_objects[object];
        for (int i = 0; i + 1 < x.dots; ++i) {
            ColoredOrdinal e{2, {static_cast<bool>(x.colored[i])}};
            r.push_back(find_arrow(FatMap{e, x, {i, i + 1}}));
        }
    }
    return r;
}

int Site::vertex_arrow(int edge_object, int end) const {
    if (kind == Kind::Delta) return find_arrow(SimplexMap{0, edge_object, {end}});
    return find_arrow(FatMap{ColoredOrdinal::plain(0), fat_objects[edge_object], {end}});
}

SitePtr make_delta_site(int max_level) {
    auto s = std::make_shared<Site>();
    s->kind = Site::Kind::Delta;
    for (int k = 0; k <= max_level; ++k) s->object_names.push_back("[" + std::to_string(k) + "]");
    for (const auto& m : window_simplex_maps({max_level + 1, max_level})) {
        s->simplex_index[m] = s->num_arrows();
        s->arrows.push_back({m.src, m.tgt});
        s->simplex.push_back(m);
    }
    for (int k = 0; k <= max_level; ++k) s->identity.push_back(s->find_arrow(SimplexMap::identity(k)));
    finish_site(*s);
    for (int f = 0; f < s->num_arrows(); ++f)
        for (int g : s->out[s->arrows[f].tgt])
            s->comp_index[pair_key(g, f)] = s->find_arrow(compose(s->simplex[g], s->simplex[f]));
    return s;
}

SitePtr make_fat_site(const TruncationWindow& w) {
    validate_window(w);
    auto s = std::make_shared<Site>();
    s->kind = Site::Kind::Fat;
    s->fat_objects = window_objects(w);
    for (const auto& x : s->fat_objects) s->object_names.push_back(x.str());
    for (int i = 0; i < s->num_objects(); ++i)
        for (int j = 0; j < s->num_objects(); ++j)
            for (auto& m : enumerate_hom(s->fat_objects[i], s->fat_objects[j])) {
                s->fat_index[m] = s->num_arrows();
                s->arrows.push_back({i, j});
                s->fat.push_back(m);
            }
    for (const auto& x : s->fat_objects) s->identity.push_back(s->find_arrow(FatMap::identity(x)));
    finish_site(*s);
    for (int f = 0; f < s->num_arrows(); ++f)
        for (int g : s->out[s->arrows[f].tgt])
            s->comp_index[pair_key(g, f)] = s->find_arrow(compose(s->fat[g], s->fat[f]));
    return s;
}

// ---------------------------------------------------------------- pseudo-diagrams

Mor PseudoDiagram::cell(int f, int g, Obj y) const {
    auto it = stored_cells.find({f, g});
    if (it != stored_cells.end()) return it->second[y];
    const FinCat& L = *level[site->arrows[f].src];
    Obj a = act[f].ob[act[g].ob[y]];
    Obj b = act[site->compose(g, f)].ob[y];
    if (L.is_thin()) return L.thin_hom(a, b);
    return a == b ? L.identity(a) : -1;
}

PseudoDiagram strict_diagram(SitePtr site, std::vector<CatPtr> level, std::vector<FunctorMap> act) {
    PseudoDiagram d;
    d.site = std::move(site);
    d.level = std::move(level);
    d.act = std::move(act);
    return d;
}

LawReport check_pseudo_coherence(const PseudoDiagram& d) {
    LawReport r;
    const Site& s = *d.site;
    for (int k = 0; k < s.num_objects(); ++k) {
        ++r.checked;
        if (!functor_equal(d.act[s.identity[k]], FunctorMap::identity(d.level[k])))
            r.fail("identity of " + s.object_names[k] + " does not act as the identity");
    }
    // Cells: existence, typing, invertibility, naturality on non-thin levels.
    for (int f = 0; f < s.num_arrows(); ++f)
        for (int g : s.out[s.arrows[f].tgt]) {
            const int gf = s.compose(g, f);
            const FinCat& A = *d.level[s.arrows[f].src];
            const FinCat& C = *d.level[s.arrows[g].tgt];
            bool bad = false;
            for (Obj y = 0; y < C.num_objects() && !bad; ++y) {
                ++r.checked;
                Mor c = d.cell(f, g, y);
                Obj lhs = d.act[f].ob[d.act[g].ob[y]], rhs = d.act[gf].ob[y];
                if (c < 0 || A.src(c) != lhs || A.tgt(c) != rhs || !A.is_iso(c)) {
                    r.fail("no invertible comparison cell for " + where(s, f, g) + " at object " +
                           std::to_string(y));
                    bad = true;
                }
            }
            if (bad || A.is_thin()) continue;
            for (Mor m = 0; m < C.num_morphisms() && !bad; ++m) {
                ++r.checked;
                Mor top = A.compose(d.act[gf].map_mor(m), d.cell(f, g, C.src(m)));
                Mor bottom = A.compose(d.cell(f, g, C.tgt(m)), d.act[f].map_mor(d.act[g].map_mor(m)));
                if (top != bottom) {
                    r.fail("comparison cell for " + where(s, f, g) + " is not natural at morphism " +
                           std::to_string(m));
                    bad = true;
                }
            }
        }
    // Pasting coherence; in a thin level both pastings are parallel, hence equal.
    for (int f = 0; f < s.num_arrows(); ++f) {
        const FinCat& A = *d.level[s.arrows[f].src];
        if (A.is_thin()) continue;
        for (int g : s.out[s.arrows[f].tgt]) {
            const int gf = s.compose(g, f);
            for (int h : s.out[s.arrows[g].tgt]) {
                const int hg = s.compose(h, g);
                const FinCat& D = *d.level[s.arrows[h].tgt];
                for (Obj y = 0; y < D.num_objects(); ++y) {
                    ++r.checked;
                    Mor one = A.compose(d.cell(f, hg, y), d.act[f].map_mor(d.cell(g, h, y)));
                    Mor two = A.compose(d.cell(gf, h, y), d.cell(f, g, d.act[h].ob[y]));
                    if (one != two) {
                        r.fail("coherence fails for " + s.arrow_name(h) + " after " + where(s, f, g) +
                               " at object " + std::to_string(y));
                        break;
                    }
                }
            }
        }
    }
    return r;
}

LawReport check_strict_functoriality(const PseudoDiagram& d, const std::function<bool(int)>& filter) {
    LawReport r;
    const Site& s = *d.site;
    for (int f = 0; f < s.num_arrows(); ++f) {
        if (filter && !filter(f)) continue;
        for (int g : s.out[s.arrows[f].tgt]) {
            if (filter && !filter(g)) continue;
            ++r.checked;
            auto diff = functor_difference(d.act[s.compose(g, f)], compose(d.act[f], d.act[g]));
            if (!diff.empty()) r.fail(where(s, f, g) + ": " + diff);
        }
    }
    return r;
}

bool is_isomorphism(const FunctorMap& f) {
    auto fl = equivalence_flags(f);
    return fl.is_equivalence && fl.injective_on_objects &&
           f.source->num_objects() == f.target->num_objects();
}

SegalMap segal_map(const PseudoDiagram& d, int object) {
    const Site& s = *d.site;
    auto edges = s.edge_arrows(object);
    std::vector<CatPtr> factors;
    std::vector<FunctorMap> legs, right, left;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        int e = s.arrows[edges[i]].src;
        factors.push_back(d.level[e]);
        legs.push_back(d.act[edges[i]]);
        if (i + 1 < edges.size()) right.push_back(d.act[s.vertex_arrow(e, 1)]);
        if (i > 0) left.push_back(d.act[s.vertex_arrow(e, 0)]);
    }
    SegalMap m;
    m.product = chain_pullback(factors, right, left);
    m.map = m.product.pair_functor(legs);
    return m;
}

LawReport check_segal_isos(const PseudoDiagram& d, bool discrete_vertex) {
    LawReport r;
    const Site& s = *d.site;
    if (discrete_vertex) {
        ++r.checked;
        if (!d.level[s.vertex_object()]->is_discrete()) r.fail("vertex level is not discrete");
    }
    for (int k = 0; k < s.num_objects(); ++k) {
        if (s.edge_arrows(k).size() < 2) continue;
        ++r.checked;
        try {
            auto m = segal_map(d, k);
            if (!is_isomorphism(m.map)) r.fail("Segal map of " + s.object_names[k] + " is not an isomorphism");
        } catch (const std::logic_error& e) {
            r.fail("Segal map of " + s.object_names[k] + ": " + e.what());
        }
    }
    return r;
}

// ---------------------------------------------------------------- strictification

Obj StrictificationResult::find(int k, int arrow, Obj y) const { return arrow_offset[k].at(arrow) + y; }

StrictificationResult strictify(const PseudoDiagram& d) {
    const Site& s = *d.site;
    const int n = s.num_objects();
    StrictificationResult r;
    r.free_level.resize(n);
    r.free_objects.resize(n);
    r.arrow_offset.resize(n);
    r.h.resize(n);
    r.v.resize(n);
    r.g.resize(n);
    std::vector<CatPtr> Llev(n);
    for (int k = 0; k < n; ++k) {
        std::vector<CatPtr> summands;
        for (int a : s.out[k]) summands.push_back(d.level[s.arrows[a].tgt]);
        auto cp = coproduct(summands);
        r.free_level[k] = cp.cat;
        for (std::size_t i = 0; i < s.out[k].size(); ++i) {
            int a = s.out[k][i];
            r.arrow_offset[k][a] = cp.obj_offset[i];
            for (Obj y = 0; y < summands[i]->num_objects(); ++y) r.free_objects[k].push_back({a, y});
        }
        FunctorMap h;
        h.source = cp.cat;
        h.target = d.level[k];
        h.ob.resize(cp.cat->num_objects());
        for (Obj x = 0; x < cp.cat->num_objects(); ++x) {
            auto [a, y] = r.free_objects[k][x];
            h.ob[x] = d.act[a].ob[y];
        }
        if (!d.level[k]->is_thin()) {
            h.mor.resize(cp.cat->num_morphisms());
            for (Mor m = 0; m < cp.cat->num_morphisms(); ++m) {
                Obj x0 = cp.cat->src(m), x1 = cp.cat->tgt(m);
                auto [a, y0] = r.free_objects[k][x0];
                Obj y1 = r.free_objects[k][x1].second;
                std::size_t i = std::upper_bound(cp.obj_offset.begin(), cp.obj_offset.end(), x0) -
                                cp.obj_offset.begin() - 1;
                Mor local = cp.cat->mode() == FinCat::Mode::Explicit
                                ? m - cp.mor_offset[i]
                                : summands[i]->thin_hom(y0, y1);
                h.mor[m] = d.act[a].map_mor(local);
            }
        }
        auto bf = boff_factorize(h);
        r.h[k] = h;
        r.v[k] = bf.v;
        r.g[k] = bf.g;
        Llev[k] = bf.L;
    }
    std::vector<FunctorMap> act(s.num_arrows());
    for (int b = 0; b < s.num_arrows(); ++b) {
        const int j = s.arrows[b].src, k = s.arrows[b].tgt;
        FunctorMap F;
        F.source = Llev[k];
        F.target = Llev[j];
        F.ob.resize(Llev[k]->num_objects());
        for (Obj x = 0; x < Llev[k]->num_objects(); ++x) {
            auto [a, y] = r.free_objects[k][x];
            F.ob[x] = r.find(j, s.compose(a, b), y);
        }
        if (!Llev[j]->is_thin()) {
            const FinCat& Hj = *d.level[j];
            F.mor.resize(Llev[k]->num_morphisms());
            for (Mor l = 0; l < Llev[k]->num_morphisms(); ++l) {
                auto [a0, y0] = r.free_objects[k][Llev[k]->src(l)];
                auto [a1, y1] = r.free_objects[k][Llev[k]->tgt(l)];
                Mor m = r.g[k].map_mor(l);
                Mor c0 = d.cell(b, a0, y0), c1 = d.cell(b, a1, y1);
                if (c0 < 0 || c1 < 0) throw std::logic_error("strictify: missing comparison cell");
                Mor want = Hj.compose(c1, Hj.compose(d.act[b].map_mor(m), *Hj.inverse(c0)));
                F.mor[l] = -1;
                for (Mor cand : Llev[j]->hom(F.ob[Llev[k]->src(l)], F.ob[Llev[k]->tgt(l)]))
                    if (r.g[j].map_mor(cand) == want) F.mor[l] = cand;
                if (F.mor[l] < 0) throw std::logic_error("strictify: reindexed morphism not found");
            }
        }
        act[b] = std::move(F);
    }
    r.L = strict_diagram(d.site, std::move(Llev), std::move(act));
    return r;
}

StrictificationChecks check_strictification(const PseudoDiagram& d, const StrictificationResult& st) {
    StrictificationChecks c;
    const Site& s = *d.site;
    for (int k = 0; k < s.num_objects(); ++k) {
        ++c.gv_equals_h.checked;
        auto diff = functor_difference(compose(st.g[k], st.v[k]), st.h[k]);
        if (!diff.empty()) c.gv_equals_h.fail(s.object_names[k] + ": " + diff);
        ++c.g_equivalences.checked;
        auto fl = equivalence_flags(st.g[k]);
        if (!fl.is_equivalence) c.g_equivalences.fail(s.object_names[k] + ": " + fl.witness);
    }
    c.L_strict = check_strict_functoriality(st.L);
    c.L_segal = check_segal_isos(st.L, false);
    if (s.kind == Site::Kind::Fat) {
        // h at k equals the tuple of h at the edges under the Segal decomposition.
        for (int k = 0; k < s.num_objects(); ++k) {
            auto edges = s.edge_arrows(k);
            if (edges.size() < 2) continue;
            for (Obj x = 0; x < static_cast<Obj>(st.free_objects[k].size()); ++x) {
                auto [a, y] = st.free_objects[k][x];
                ++c.h_tuple.checked;
                for (int e : edges) {
                    int ek = s.arrows[e].src;
                    Obj lhs = d.act[e].ob[st.h[k].ob[x]];
                    Obj rhs = st.h[ek].ob[st.find(ek, s.compose(a, e), y)];
                    if (lhs != rhs) {
                        c.h_tuple.fail(s.object_names[k] + ": free object " + std::to_string(x) +
                                       " differs on edge " + s.arrow_name(e));
                        break;
                    }
                }
            }
        }
    }
    return c;
}

}  // namespace wgfair
