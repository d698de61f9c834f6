#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wgfair/fair2.hpp"
#include "wgfair/site.hpp"
#include "wgfair/wgdouble.hpp"

namespace wgfair {

// Strict simplicial object of a double category with its chain products kept.
struct Nerve {
    ChainData chain;
    ChainLevels levels;
    PseudoDiagram diagram;
};
Nerve make_nerve(const WGDouble& x, SitePtr delta_site);

// Chains of arrows over X0^d made strictly composable, landing in the nerve
// levels: componentwise normalization when the composition has one, otherwise
// the unit-preserving pseudo-inverse of the induced Segal map. Length 1 is
// the identity; lengths 2 and 3 are supported.
class ChainStrictifier {
public:
    ChainStrictifier(const WGDouble& x, const DiscreteComposition& dc, Strategy s, const Nerve& n);
    Obj ob(const std::vector<Obj>& chain) const;
    Mor mor(const std::vector<Mor>& chain) const;

private:
    std::vector<FiberProduct> nerve_;  // nerve products by length
    std::optional<Normalization> norm_;
    std::vector<FiberProduct> strict_;  // X2, X3 of the double category
    std::vector<FiberProduct> over_discrete_;
    std::vector<FunctorMap> backward_;
};

// ---------------------------------------------------------------- F2

// O = X0^d, A = X1 with compA = comp nu2, U = X0 with u = s0. Units compose
// to the class representative (cleavage) or to the first factor (retraction).
FairPresentation f2_presentation(const WGDouble& x, const DiscreteComposition& dc, Strategy s);

struct F2Result {
    DiscreteComposition composition;
    FairDiagram fair;
};
// Throws LawViolation when the presentation breaks a fair law.
F2Result F2(const WGDouble& x, Strategy s, SitePtr fat_site);

struct F2Checks {
    FairReport fair;
    bool pi1_isomorphic = false;  // pi1 X -> pi1 F2 X, identity on classes
    std::string pi1_witness;
    LawReport hom_fibers;         // X(a, b) = F2X(a, b) for all object classes
    bool ok() const { return fair.ok() && pi1_isomorphic && hom_fibers.ok(); }
};
F2Checks check_F2(const WGDouble& x, const F2Result& f);

// FO the induced map of classes, FA = F1, FU = F0.
FairMorphism F2_morphism(const F2Result& fx, const F2Result& fy, const WGMorphism& f);

// ---------------------------------------------------------------- pi*

// x evaluated at pi-images: O = X0, U = X0 with u = s0, A = X1 with comp.
FairPresentation pi_star(const WGDouble& x);
// Dropping colored components identifies (pi* X)_u with X at pi(u), and
// the identification commutes with every window map.
LawReport check_pi_star(const FairDiagram& d, const Nerve& n);
// Level u is X at pi(u), except that "o" is X0^d; maps into "o" are
// composed with gamma.
PseudoDiagram tilde_pi_star(const Nerve& n, const Discretization& disc, SitePtr fat_site);

// ---------------------------------------------------------------- S2

struct S2Result {
    PseudoDiagram target;          // tilde pi* X
    std::vector<FunctorMap> S, z;  // per fat-site object: F2X -> target, target -> F2X
    LawReport section;             // S z = Id
    LawReport equivalences;        // S equivalences, z injective equivalences
    LawReport naturality;          // S F2X(a) = target(a) S
    LawReport transported;         // a -> z target(a) S is strictly functorial
    bool ok() const { return section.ok() && equivalences.ok() && naturality.ok() && transported.ok(); }
};
S2Result S2(const WGDouble& x, const F2Result& f, Strategy s, const Nerve& n);

// ---------------------------------------------------------------- alpha, beta

// beta: Y_u -> Y_pi(u) keeps the plain components (the base object when
// every edge is colored); alpha inserts at each colored edge the minimal
// unit over its vertex.
struct AlphaBeta {
    ColoredOrdinal object, plain;
    FunctorMap alpha, beta;
};
AlphaBeta alphabeta(const FairEval& y, const ColoredOrdinal& u);

struct AlphaBetaCheck {
    bool beta_alpha_identity = false;
    bool alpha_beta_iso = false;  // every y is isomorphic to alpha beta y
    EquivalenceFlags alpha, beta;
    std::string witness;
    bool ok() const {
        return beta_alpha_identity && alpha_beta_iso && alpha.is_equivalence && beta.is_equivalence;
    }
};
AlphaBetaCheck check_alphabeta(const FairEval& y, const AlphaBeta& ab);

// ---------------------------------------------------------------- T2

struct T2Result {
    PseudoDiagram diagram;  // over the simplex site, level k = Y at the plain k-simplex
    std::vector<FatMap> lift;  // canonical lift per simplex-site arrow
    LawReport lift_independence;
    std::size_t arrows_with_several_lifts = 0;
    LawReport coherence, mono_strict, segal;
    bool ok() const { return lift_independence.ok() && coherence.ok() && mono_strict.ok() && segal.ok(); }
};
// T2Y(a) = beta Y(lift a) alpha. Requires a discrete object category.
T2Result T2(const FairDiagram& y, SitePtr delta_site);

// ---------------------------------------------------------------- St and R2

// The strict map L -> X out of a strictification induced by level functors
// t_r: H_r -> X_r commuting with the actions up to isomorphism: (a, y) goes
// to X(a)(t_r y).
struct InducedMap {
    std::vector<FunctorMap> w;
    LawReport well_defined;
    LawReport naturality;    // X(b) w_k = w_j L(b)
    LawReport equivalences;  // every w_k
};
InducedMap induced_map(const PseudoDiagram& H, const StrictificationResult& st, const PseudoDiagram& X,
                       const std::vector<FunctorMap>& t);
// g: St H -> H is strictly natural; expected when H is strict.
LawReport check_g_naturality(const PseudoDiagram& H, const StrictificationResult& st);

struct R2Result {
    T2Result t2;
    StrictificationResult st;
    StrictificationChecks checks;
    std::optional<WGDouble> x;
    std::vector<std::string> problems;
    CatWG2Report report;
    bool ok() const {
        return x && problems.empty() && report.ok() && checks.gv_equals_h.ok() && checks.g_equivalences.ok() &&
               checks.L_strict.ok() && checks.L_segal.ok();
    }
};
// St T2 Y reassembled from levels 0, 1 and the inverse Segal map at level 2.
R2Result R2(const FairDiagram& y, SitePtr delta_site);

// ---------------------------------------------------------------- round trips

struct RoundTripX {
    std::optional<F2Result> f2;
    std::optional<R2Result> r2;
    InducedMap map;                  // R2 F2 X -> X, levelwise
    std::vector<std::string> morphism_problems;
    TwoEquivalence two_equivalence;
    std::string error;               // budget or law failure that stopped the construction
    bool ok() const {
        return error.empty() && r2 && r2->ok() && map.well_defined.ok() && map.naturality.ok() &&
               map.equivalences.ok() && morphism_problems.empty() && two_equivalence.holds();
    }
};
RoundTripX roundtrip_x(const WGDouble& x, Strategy s, SitePtr delta_site, SitePtr fat_site);

// F2 R2 Y <- St F2 R2 Y -> Y. The legs out of the strictification are
// judged on hom data over the classes of its vertex level, which the
// discretization leaves unchanged.
struct RoundTripY {
    std::optional<R2Result> r2;
    std::optional<F2Result> z;           // F2 R2 Y
    std::vector<FunctorMap> t;           // Z_u -> Y_u: alpha g S
    LawReport t_equivalences;
    std::optional<StrictificationResult> st;
    StrictificationChecks st_checks;
    FairReport st_fairwg;
    LawReport g_natural;
    InducedMap map;                      // St Z -> Y
    TwoEquivalence leg_to_z, leg_to_y;
    std::string error;
    bool ok() const {
        return error.empty() && r2 && r2->ok() && t_equivalences.ok() && st_checks.gv_equals_h.ok() &&
               st_checks.g_equivalences.ok() && st_checks.L_strict.ok() && st_checks.L_segal.ok() &&
               st_checks.h_tuple.ok() && st_fairwg.ok() && g_natural.ok() && map.well_defined.ok() &&
               map.naturality.ok() && leg_to_z.holds() && leg_to_y.holds();
    }
};
RoundTripY roundtrip_y(const FairDiagram& y, Strategy s, SitePtr delta_site, SitePtr fat_site);

}  // namespace wgfair
