#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wgfair/fincat.hpp"
#include "wgfair/site.hpp"
#include "wgfair/wgdouble.hpp"

namespace wgfair {

// Generators of a fair 2-category: objects O, composable arrows A, weak
// units U over O with a semi-functor u into A. Plain edges of a colored
// ordinal are evaluated in A, colored edges in U.
struct FairPresentation {
    CatPtr O, A, U;
    FunctorMap srcA, tgtA;  // A -> O
    FunctorMap srcU;        // U -> O, both ends of a unit
    FunctorMap u;           // U -> A
    FiberProduct pairsA;    // A x_O A, (f, g) with tgtA f = srcA g
    FiberProduct pairsU;    // U x_O U
    FunctorMap compA;       // pairsA -> A, "g after f"
    FunctorMap compU;       // pairsU -> U

    Obj compose_a(Obj f, Obj g) const;
    Obj compose_u(Obj x, Obj y) const;
};

// Fills pairsA and pairsU from the categories and endpoint functors. The
// composition functors take these products as their sources.
void build_pairs(FairPresentation& p);
LawReport validate_presentation(const FairPresentation& p);

// Evaluation at arbitrary colored ordinals and fat maps, cached. Levels are
// edgewise fiber products over O; a map acts edge by edge through iterated
// composites along the image path.
class FairEval {
public:
    explicit FairEval(FairPresentation p);
    const FairPresentation& presentation() const { return p_; }
    CatPtr level(const ColoredOrdinal& x) const;
    // Components of an object of level(x), one per edge (the object itself for one dot).
    std::vector<Obj> components(const ColoredOrdinal& x, Obj y) const;
    Obj assemble(const ColoredOrdinal& x, const std::vector<Obj>& parts) const;
    std::vector<Mor> mor_components(const ColoredOrdinal& x, Mor m) const;
    Mor assemble_mor(const ColoredOrdinal& x, const std::vector<Mor>& parts) const;
    // Y(f): level(f.tgt) -> level(f.src).
    const FunctorMap& act(const FatMap& f) const;
    // Legs of the edgewise product: right[i] is the target of edge i, left[i] the source of edge i+1.
    void legs(const ColoredOrdinal& x, std::vector<FunctorMap>& right, std::vector<FunctorMap>& left) const;

private:
    struct Level {
        CatPtr cat;
        FiberProduct product;  // three or more dots
        std::vector<bool> colored;
    };
    const Level& get(const ColoredOrdinal& x) const;

    FairPresentation p_;
    mutable std::map<ColoredOrdinal, Level> levels_;
    mutable std::map<FatMap, FunctorMap> acts_;
};

struct FairDiagram {
    FairPresentation p;
    std::shared_ptr<const FairEval> eval;
    PseudoDiagram diagram;  // strict, over the fat site
    LawReport functoriality;
};
FairDiagram build_fair(const FairPresentation& p, SitePtr fat_site);

struct FairReport {
    LawReport presentation;
    LawReport discrete;        // O discrete (fair) or hd (weakly globular)
    LawReport generator_maps;  // the five maps
    LawReport vertical_maps;
    LawReport segal;           // Segal maps isomorphisms
    LawReport induced_segal;   // into fiber products over O^d
    bool ok() const {
        return presentation.ok() && discrete.ok() && generator_maps.ok() && vertical_maps.ok() && segal.ok() &&
               induced_segal.ok();
    }
};
FairReport validate_fair2(const FairDiagram& d);
FairReport validate_fairwg(const FairDiagram& d);
// The same checks on a strict diagram over the fat site with no presentation
// (for instance a strictification); the presentation report stays empty.
FairReport validate_fair_diagram(const PseudoDiagram& d, bool weakly_globular);

HomData fair_hom_data(const FairPresentation& p);
// Hom data read off a strict fat-site diagram: vertex "o", arrows "o-o",
// composition through the inverse Segal map of "o-o-o", units from "o=o".
HomData diagram_hom_data(const PseudoDiagram& d);
Pi1 pi1_fair(const FairPresentation& p);
Subcategory hom_fiber_fair(const FairPresentation& p, Obj a, Obj b);

struct FairMorphism {
    FunctorMap FO, FA, FU;
};
std::vector<std::string> validate_fair_morphism(const FairPresentation& x, const FairPresentation& y,
                                                const FairMorphism& f);
FairMorphism identity_fair_morphism(const FairPresentation& p);
TwoEquivalence is_2equivalence_fair(const FairPresentation& x, const FairPresentation& y, const FairMorphism& f);

// Rebase over O^d. Identity on presentations whose O is already discrete.
struct DiscretizedFair {
    FairPresentation p;
    FairMorphism comparison;  // input -> output: gamma on O, identities on A and U
    bool identity = false;    // the input was returned unchanged
};
DiscretizedFair discretize_fair(const FairPresentation& p, Strategy s);

// B as a fair 2-category: O = U = ob B, A = morphisms of B, all discrete.
FairPresentation fair_category_instance(const CatPtr& B);

// The five generator maps as fat-site arrows (o=o -> o at either dot, and the
// three three-dot contractions).
std::vector<int> generator_arrows(const Site& s);

}  // namespace wgfair
