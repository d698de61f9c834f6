#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace wgfair {

using Obj = std::int32_t;
using Mor = std::int64_t;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a construction would materialize more objects than allowed.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t object_budget();
void set_object_budget(std::size_t n);
void check_budget(std::size_t n, const char* what);

class FinCat;
using CatPtr = std::shared_ptr<const FinCat>;

// A finite category. Two storage modes share one interface:
//  - Explicit: morphism tables with a composition map.
//  - Equivalence: a thin groupoid given by class labels on objects (every
//    homotopically discrete category). Morphisms are implicit pairs (x, y)
//    with x ~ y, numbered class by class.
class FinCat {
public:
    enum class Mode { Explicit, Equivalence };

    static CatPtr make_explicit(Obj nobj, std::vector<Obj> src, std::vector<Obj> tgt,
                                std::vector<Mor> identity,
                                const std::vector<std::array<Mor, 3>>& compose);
    static CatPtr make_equivalence(const std::vector<std::int64_t>& labels);
    static CatPtr discrete(Obj n);
    static CatPtr chaotic(Obj n);
    static CatPtr terminal() { return discrete(1); }
    static CatPtr empty() { return discrete(0); }

    Mode mode() const { return mode_; }
    Obj num_objects() const { return nobj_; }
    Mor num_morphisms() const { return nmor_; }

    Obj src(Mor m) const;
    Obj tgt(Mor m) const;
    Mor identity(Obj x) const;
    // g after f; requires tgt(f) == src(g).
    Mor compose(Mor g, Mor f) const;
    std::vector<Mor> hom(Obj x, Obj y) const;
    std::size_t hom_size(Obj x, Obj y) const;
    // All morphisms with source x, ordered by id.
    std::vector<Mor> out(Obj x) const;
    // Unique morphism x -> y in a thin category, -1 if none.
    Mor thin_hom(Obj x, Obj y) const;

    bool is_thin() const { return thin_; }
    bool is_discrete() const { return discrete_; }
    bool is_iso(Mor m) const;
    std::optional<Mor> inverse(Mor m) const;

    // Isomorphism classes, numbered in order of their minimal object.
    Obj num_iso_classes() const { return nclasses_; }
    Obj iso_class(Obj x) const { return cls_[x]; }
    const std::vector<Obj>& iso_labels() const { return cls_; }
    const std::vector<Obj>& class_members(Obj c) const { return members_[c]; }

    // Composition entries (g, f, g∘f) for every composable pair.
    std::vector<std::array<Mor, 3>> composition_table() const;

private:
    FinCat() = default;
    void finish_classes();

    Mode mode_ = Mode::Explicit;
    Obj nobj_ = 0;
    Mor nmor_ = 0;
    bool thin_ = true;
    bool discrete_ = true;

    // Explicit storage.
    std::vector<Obj> src_, tgt_;
    std::vector<Mor> ident_;
    std::unordered_map<std::uint64_t, std::vector<Mor>> homs_;
    std::unordered_map<std::uint64_t, Mor> comp_;
    std::vector<std::vector<Mor>> out_;
    std::vector<Mor> inverse_;

    // Class structure (both modes); Equivalence mode numbers morphisms by it.
    std::vector<Obj> cls_;
    Obj nclasses_ = 0;
    std::vector<std::vector<Obj>> members_;
    std::vector<Obj> pos_;
    std::vector<Mor> base_;
};

struct FunctorMap {
    CatPtr source, target;
    std::vector<Obj> ob;
    // Stored only when the target is not thin; thin targets determine it.
    std::vector<Mor> mor;

    Obj operator()(Obj x) const { return ob[x]; }
    Mor map_mor(Mor m) const;

    static FunctorMap identity(CatPtr c);
    static FunctorMap from_functions(CatPtr s, CatPtr t, const std::function<Obj(Obj)>& fo,
                                     const std::function<Mor(Mor)>& fm = {});
};

// g after f.
FunctorMap compose(const FunctorMap& g, const FunctorMap& f);
std::vector<std::string> validate_functor(const FunctorMap& f);
bool functor_equal(const FunctorMap& a, const FunctorMap& b);
// First object or morphism where two parallel functors differ, empty if equal.
std::string functor_difference(const FunctorMap& a, const FunctorMap& b);

struct NatTransf {
    FunctorMap from, to;
    std::vector<Mor> comp;
    bool iso = false;
};

NatTransf make_nat(FunctorMap from, FunctorMap to, std::vector<Mor> comp);
std::vector<std::string> validate_nat(const NatTransf& t);

struct CategoryTable {
    struct Row {
        long long id, src, tgt;
    };
    std::vector<long long> objects;
    std::vector<Row> morphisms;
    std::vector<std::pair<long long, long long>> identities;
    std::vector<std::array<long long, 3>> compose;
};

struct ValidationReport {
    std::vector<std::string> structural;
    std::vector<std::string> laws;
    bool ok() const { return structural.empty() && laws.empty(); }
};

ValidationReport validate_category(const CategoryTable& t);
CatPtr build_category(const CategoryTable& t);
CategoryTable to_table(const FinCat& c);
// Law check on an already built category (used for constructed tables).
ValidationReport validate_category(const FinCat& c);

struct IsoClasses {
    Obj count = 0;
    std::vector<Obj> label;
};
IsoClasses iso_classes(const FinCat& c);
// Action of p on a functor: class of x ↦ class of F x.
std::vector<Obj> iso_class_map(const FunctorMap& f);

struct HdResult {
    bool hd = true;
    std::optional<Mor> witness;
};
HdResult is_homotopically_discrete(const FinCat& c);

struct Discretization {
    CatPtr Xd;
    FunctorMap gamma;        // X -> Xd
    FunctorMap gamma_prime;  // Xd -> X, minimal object of each class
};
Discretization discretize(const CatPtr& c);

// Chain fiber product F_0 x_{B_1} F_1 x_{B_2} ... with right[i]: F_i -> B_{i+1}
// and left[i]: F_{i+1} -> B_{i+1}. Objects are tuples in lexicographic order.
struct FiberProduct {
    CatPtr cat;
    std::vector<CatPtr> factors;
    std::size_t arity = 0;
    std::vector<Obj> tuples;
    // Explicit mode only: component morphisms of each morphism.
    std::vector<Mor> mor_tuples;

    const Obj* tuple(Obj x) const { return tuples.data() + x * arity; }
    Obj find(const Obj* t) const;
    Obj find(const std::vector<Obj>& t) const { return find(t.data()); }
    Mor component(Mor m, std::size_t i) const;
    Mor find_mor(const std::vector<Mor>& comps) const;
    FunctorMap projection(std::size_t i) const;
    // Functor into this product from a cone given by per-factor functors.
    FunctorMap pair_functor(const std::vector<FunctorMap>& legs) const;
};

FiberProduct chain_pullback(const std::vector<CatPtr>& factors,
                            const std::vector<FunctorMap>& right,
                            const std::vector<FunctorMap>& left);
FiberProduct pullback(const FunctorMap& f, const FunctorMap& g);
// Number of objects a chain fiber product would have, without building it.
std::size_t chain_pullback_size(const std::vector<CatPtr>& factors,
                                const std::vector<FunctorMap>& right,
                                const std::vector<FunctorMap>& left);

struct EquivalenceFlags {
    bool fully_faithful = false;
    bool essentially_surjective = false;
    bool injective_on_objects = false;
    bool is_equivalence = false;
    std::string witness;
};
EquivalenceFlags equivalence_flags(const FunctorMap& f);

// The comparison from a strict chain fiber product (legs into one
// homotopically discrete base) to the same chain over the base's
// discretization. It is always fully faithful because the base is thin, so
// it is an equivalence iff every chain of iso classes is realized.
EquivalenceFlags discretized_chain_flags(const FiberProduct& strict, const std::vector<FunctorMap>& right,
                                         const std::vector<FunctorMap>& left);

struct BoffFactorization {
    CatPtr L;
    FunctorMap v;  // A -> L, identity on objects
    FunctorMap g;  // L -> B, fully faithful
};
BoffFactorization boff_factorize(const FunctorMap& f);

struct Retraction {
    FunctorMap forward;   // F, injective on objects
    FunctorMap backward;  // G with G F = Id
    NatTransf counit;     // F G => Id
};
Retraction retraction_pseudo_inverse(const FunctorMap& f);
// Retraction with a prescribed backward object map and counit components
// F(G b) -> b; morphisms follow from full faithfulness of f. Requires
// G F = Id on objects and identity counit on the image.
Retraction retraction_with_choice(const FunctorMap& f, std::vector<Obj> backward_ob,
                                  std::vector<Mor> counit);

struct Subcategory {
    CatPtr cat;
    FunctorMap inclusion;
    std::vector<Obj> index;  // object of the ambient category -> subcategory object, or -1
};
// Full subcategory on the given objects, kept in the given order.
Subcategory full_subcategory(const CatPtr& c, const std::vector<Obj>& objects);
// Restriction of f to full subcategories of its source and target; f must
// send the source objects into the target subcategory.
FunctorMap restrict_functor(const FunctorMap& f, const Subcategory& src, const Subcategory& tgt);

// Disjoint union; object and morphism ids of summand i start at the offsets.
struct Coproduct {
    CatPtr cat;
    std::vector<Obj> obj_offset;
    std::vector<Mor> mor_offset;
};
Coproduct coproduct(const std::vector<CatPtr>& summands);

// Minimal-id isomorphism x -> y, -1 if x and y are not isomorphic.
Mor min_iso(const FinCat& c, Obj x, Obj y);

// Small explicit categories.
// Poset on n elements generated by the pairs (a <= b).
CatPtr poset_category(Obj n, const std::vector<std::pair<Obj, Obj>>& generators);
// One-object category of the cyclic group of order n; morphism k is k mod n.
CatPtr cyclic_group_category(Obj n);

}  // namespace wgfair
