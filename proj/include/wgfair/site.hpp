#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "wgfair/deltasite.hpp"
#include "wgfair/fincat.hpp"

namespace wgfair {

// A finite index category: the truncated simplex category or the fat-delta
// window. Arrows point the covariant way; diagrams on the site are
// contravariant, so an arrow a -> b acts as a functor H_b -> H_a.
struct Site {
    enum class Kind { Delta, Fat };
    struct Arrow {
        int src = 0, tgt = 0;
    };

    Kind kind = Kind::Delta;
    std::vector<std::string> object_names;
    std::vector<Arrow> arrows;
    std::vector<int> identity;
    std::vector<std::vector<int>> out;  // arrows by source
    std::vector<std::vector<int>> in;   // arrows by target

    // Payloads; exactly one is filled.
    std::vector<SimplexMap> simplex;
    std::vector<FatMap> fat;
    std::vector<ColoredOrdinal> fat_objects;

    int num_objects() const { return static_cast<int>(object_names.size()); }
    int num_arrows() const { return static_cast<int>(arrows.size()); }
    // g after f.
    int compose(int g, int f) const;
    std::string arrow_name(int a) const;
    int find_object(const std::string& name) const;
    int find_arrow(const SimplexMap& m) const;
    int find_arrow(const FatMap& m) const;
    bool is_mono(int a) const;

    // Objects with a Segal decomposition: the single-vertex object, the edge
    // objects, and per object the edge inclusions (in order) together with
    // the two vertex inclusions of each edge object.
    int vertex_object() const;
    std::vector<int> edge_arrows(int object) const;
    int vertex_arrow(int edge_object, int end) const;  // end 0 = source, 1 = target

    std::unordered_map<std::uint64_t, int> comp_index;
    std::map<SimplexMap, int> simplex_index;
    std::map<FatMap, int> fat_index;
};

using SitePtr = std::shared_ptr<const Site>;

SitePtr make_delta_site(int max_level);
SitePtr make_fat_site(const TruncationWindow& w);

// A pseudo-functor on a site. Comparison cells phi(f, g): H(f) H(g) => H(g f)
// have components indexed by objects of H(tgt g) living in H(src f). Cells
// of thin levels are canonical and never stored; identity arrows act strictly.
struct PseudoDiagram {
    SitePtr site;
    std::vector<CatPtr> level;
    std::vector<FunctorMap> act;
    std::map<std::pair<int, int>, std::vector<Mor>> stored_cells;

    // -1 when no comparison exists between the two composites at y.
    Mor cell(int f, int g, Obj y) const;
};

struct LawReport {
    std::vector<std::string> failures;
    std::size_t checked = 0;
    bool ok() const { return failures.empty(); }
    void fail(std::string s) {
        if (failures.size() < 20) failures.push_back(std::move(s));
        else if (failures.size() == 20) failures.push_back("...");
    }
};

// Identity actions strict, cells well-typed isomorphisms, and the two
// pastings agree on every composable triple.
LawReport check_pseudo_coherence(const PseudoDiagram& d);
// act(g f) == act(f) act(g) exactly for composable pairs whose arrows both
// satisfy the filter (all pairs when the filter is empty).
LawReport check_strict_functoriality(const PseudoDiagram& d,
                                     const std::function<bool(int)>& filter = {});
// Segal maps H_k -> H_e1 x_{H_v} ... x_{H_v} H_en are isomorphisms, and
// optionally the vertex level is discrete.
LawReport check_segal_isos(const PseudoDiagram& d, bool discrete_vertex = true);
bool is_isomorphism(const FunctorMap& f);

// Segal map of one object into the fiber product of its edge levels.
struct SegalMap {
    FiberProduct product;
    FunctorMap map;
};
SegalMap segal_map(const PseudoDiagram& d, int object);

// Strict diagram on the site from per-arrow functors (cells identities).
PseudoDiagram strict_diagram(SitePtr site, std::vector<CatPtr> level, std::vector<FunctorMap> act);

struct StrictificationResult {
    PseudoDiagram L;                 // strict
    std::vector<CatPtr> free_level;  // (TUH)_k
    std::vector<std::vector<std::pair<int, Obj>>> free_objects;  // (arrow k -> r, y in H_r)
    std::vector<FunctorMap> h, v, g;
    // Object of L_k for (arrow, y).
    Obj find(int k, int arrow, Obj y) const;
    std::vector<std::unordered_map<int, Obj>> arrow_offset;  // per level, first object of each block
};

// Free-diagram factorization h = g v with v bijective on objects and g fully
// faithful; reindexing conjugates by the comparison cells.
StrictificationResult strictify(const PseudoDiagram& d);

struct StrictificationChecks {
    LawReport gv_equals_h, g_equivalences, L_strict, L_segal, h_tuple;
};
StrictificationChecks check_strictification(const PseudoDiagram& d, const StrictificationResult& s);

}  // namespace wgfair
