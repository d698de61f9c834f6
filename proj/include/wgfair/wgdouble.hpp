#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <string>
#include <vector>

#include "wgfair/fincat.hpp"
#include "wgfair/site.hpp"

namespace wgfair {

// Raised when generators violate the internal-category or simplicial laws.
struct LawViolation : std::runtime_error {
    std::vector<std::string> witnesses;
    explicit LawViolation(std::vector<std::string> w)
        : std::runtime_error(w.empty() ? "law violation" : w.front()), witnesses(std::move(w)) {}
};

// Generators of a double category. d1 = source, d0 = target. Composable
// pairs (f, g) satisfy d0 f = d1 g; comp_ob maps them to "g after f".
struct WGGenerators {
    CatPtr X0, X1;
    FunctorMap d0, d1, s0;
    std::map<std::pair<Obj, Obj>, Obj> comp_ob;
    std::map<std::pair<Mor, Mor>, Mor> comp_mor;  // only needed when X1 is not thin
};

struct WGDouble {
    CatPtr X0, X1;
    FunctorMap d0, d1, s0;
    FiberProduct X2, X3;  // chain pullbacks of X1 over X0
    FunctorMap comp;      // X2 -> X1

    CatPtr level(int k) const;
    // Components of a level-k object; the vertex itself at level 0.
    std::vector<Obj> tuple(int k, Obj x) const;
    Obj compose_ob(Obj f, Obj g) const;
};

WGDouble from_generators(const WGGenerators& g);
// Levels and composition only, no law checks; for planted invalid inputs.
WGDouble assemble_unchecked(const WGGenerators& g);
WGGenerators to_generators(const WGDouble& x);

// Composable chains of an "arrow" category over a "vertex" category with a
// binary composition and units, evaluated on the truncated simplex site by
// block folds. Serves both the strict simplicial object of a double
// category and tr2, where vertices are discretized.
struct ChainData {
    CatPtr vertex, arrow;
    FunctorMap src, tgt;  // arrow -> vertex
    std::function<Obj(Obj, Obj)> comp_ob;
    std::function<Mor(Mor, Mor)> comp_mor;  // used when the arrow category is not thin
    std::function<Obj(Obj)> unit_ob;
    std::function<Mor(Mor)> unit_mor;
};
struct ChainLevels {
    std::vector<CatPtr> level;
    std::vector<FiberProduct> product;  // entries 2..max_level are filled
};
ChainLevels chain_levels(const ChainData& c, int max_level);
FunctorMap chain_action(const ChainData& c, const ChainLevels& lv, const SimplexMap& a);
PseudoDiagram chain_diagram(const ChainData& c, SitePtr site);

// The strict simplicial object of x on the truncated site.
PseudoDiagram nerve_diagram(const WGDouble& x, SitePtr site);
ChainData nerve_chain(const WGDouble& x);

struct SegalMaps {
    FunctorMap mu2, mu3;                      // into fiber products over X0
    FiberProduct over_discrete2, over_discrete3;
    FunctorMap mu_hat2, mu_hat3;              // into fiber products over X0^d
};
SegalMaps segal_maps(const WGDouble& x);
// Pseudo-inverse of the induced Segal map mu_hat: chains over the discrete
// objects -> strict chains. Chains made only of units go to the constant
// unit chain at their first vertex, so units still compose to units; other
// chains go to the minimal strict chain of their class.
// X1 -> X1 onto one object per iso class (s0 of the minimal vertex for unit
// classes), conjugating morphisms by the minimal isomorphisms.
FunctorMap class_minimum(const WGDouble& x);
Retraction unit_preserving_retraction(const WGDouble& x, const FunctorMap& mu_hat, const FiberProduct& over);

struct CatWG2Report {
    bool homotopically_discrete = false;
    bool segal_isos = false;
    bool induced_equivalences = false;
    std::vector<std::string> witnesses;
    bool ok() const { return homotopically_discrete && segal_isos && induced_equivalences; }
};
CatWG2Report validate_catwg2(const WGDouble& x);

// π1 of a composition structure: objects are iso classes of vertices,
// morphisms iso classes of arrows, composition through strictly composable
// representatives.
struct Pi1 {
    CatPtr cat;
    std::vector<std::string> problems;
};
Pi1 pi1_from(const FinCat& vertex, const FinCat& arrow, const FunctorMap& src, const FunctorMap& tgt,
             const FiberProduct& pairs, const std::function<Obj(Obj, Obj)>& comp_ob,
             const std::function<Obj(Obj)>& unit_ob);
Pi1 pi1_double(const WGDouble& x);

// Full subcategory of X1 on objects with endpoint classes (a, b).
Subcategory hom_fiber(const WGDouble& x, Obj a, Obj b);

struct WGMorphism {
    FunctorMap F0, F1;
};
std::vector<std::string> validate_wg_morphism(const WGDouble& x, const WGDouble& y, const WGMorphism& f);
WGMorphism compose(const WGMorphism& g, const WGMorphism& f);
WGMorphism identity_morphism(const WGDouble& x);

struct TwoEquivalence {
    bool fibers = false;
    bool pi1_equivalence = false;
    bool pi1_object_classes_surjective = false;  // the relaxed form of the π1 condition
    std::string witness;
    bool holds() const { return fibers && pi1_equivalence; }
    bool relaxed_holds() const { return fibers && pi1_object_classes_surjective; }
};
// Shared by double categories and fair diagrams: arrow-level data with
// endpoint functors into a vertex level, and the induced π1 categories.
struct HomData {
    CatPtr vertex, arrow;
    FunctorMap src, tgt;
    Pi1 pi1;
};
HomData hom_data(const WGDouble& x);
TwoEquivalence two_equivalence(const HomData& x, const HomData& y, const FunctorMap& on_vertex,
                               const FunctorMap& on_arrow);
TwoEquivalence is_2equivalence_double(const WGDouble& x, const WGDouble& y, const WGMorphism& f);
// Functor between π1 categories induced by level maps; throws if not well defined.
FunctorMap pi1_functor(const HomData& x, const HomData& y, const FunctorMap& on_vertex,
                       const FunctorMap& on_arrow);

// D2: level 0 replaced by its discretization, faces γ d_i and degeneracy s0 γ'.
struct D2Result {
    PseudoDiagram diagram;
    std::vector<FunctorMap> comparison;  // X_k -> (D2 X)_k
    std::vector<EquivalenceFlags> flags;
    LawReport defining_equations;
    LawReport semi_simplicial;
    LawReport coherence;
};
D2Result d2_construction(const WGDouble& x, SitePtr site);

// Source transport along the unique X0-isomorphism x -> d1 f.
struct Cleavage {
    std::map<std::pair<Obj, Obj>, Obj> transport;  // (f, x) -> phi* f
};
LawReport validate_cleavage(const WGDouble& x, const Cleavage& c);

enum class Strategy { Cleavage, Retraction };
Strategy parse_strategy(const std::string& s);
std::string strategy_name(Strategy s);

// Normalization of arrows to the minimal representatives of their endpoint
// classes, with units sent to units; lambda[f]: N f -> f.
struct Normalization {
    FunctorMap N;
    std::vector<Mor> lambda;
    std::vector<Obj> rep;  // X0 object -> minimal object of its class
};
Normalization normalize_endpoints(const WGDouble& x);

// Composition of X1 over X0^d: comp after nu2, with nu2 from the strategy.
struct DiscreteComposition {
    Discretization disc;
    FiberProduct pairs;  // X1 x_{X0^d} X1
    FunctorMap nu2;      // pairs -> X2
    FunctorMap compA;    // pairs -> X1
    FunctorMap mu_hat2;  // X2 -> pairs
    std::optional<Normalization> norm;  // cleavage, when every arrow class has an arrow over the representatives
};
DiscreteComposition discrete_composition(const WGDouble& x, Strategy s);

struct Tr2Result {
    DiscreteComposition composition;
    ChainData chain;
    PseudoDiagram diagram;
    LawReport semi_simplicial;  // exact equalities among face composites
    LawReport coherence;
    LawReport segal;
    LawReport associativity;
    LawReport retraction;       // nu2 mu_hat2 = Id
};
Tr2Result tr2_strong_segalic(const WGDouble& x, Strategy s, SitePtr site);
// Squares H_Y(a) tr2F = tr2F H_X(a) for every mono arrow of the site.
LawReport tr2_naturality(const WGDouble& x, const Tr2Result& tx, const WGDouble& y, const Tr2Result& ty,
                         const WGMorphism& f);
// Level-k component of tr2 applied to a morphism.
FunctorMap tr2_component(const WGDouble& x, const Tr2Result& tx, const WGDouble& y, const Tr2Result& ty,
                         const WGMorphism& f, int k);

// Example families.
struct SurjectionInstance {
    WGDouble x;
    Cleavage cleavage;
    CatPtr B;
    std::vector<Obj> t;  // S -> ob B
    // X1 object of (s, beta, s').
    std::map<std::tuple<Obj, Mor, Obj>, Obj> index;
    std::vector<std::tuple<Obj, Mor, Obj>> objects;
};
SurjectionInstance generate_from_surjection(const CatPtr& B, const std::vector<Obj>& t);
WGDouble category_instance(const CatPtr& B);
WGDouble terminal_double();
// X0 = chaotic{a, a'}, X1 = a single arrow a -> a' with no composites. Not
// an internal category (s0 cannot split the faces); assemble_unchecked
// turns it into a WGDouble that fails the induced Segal condition.
WGGenerators micro_counterexample();
// X0 terminal, X1 the one-object category of Z/2 with composition by addition.
WGDouble cyclic_double();
// Collapse of a surjection instance onto the category instance of its base.
WGMorphism collapse_to_base(const SurjectionInstance& s, const WGDouble& base);

struct GenBounds {
    int max_objects = 12;
    int max_morphisms = 40;
};
struct RandomInstance {
    SurjectionInstance inst;
    std::string description;
};
RandomInstance generate_random_wg(std::uint64_t seed, const GenBounds& b);

}  // namespace wgfair
