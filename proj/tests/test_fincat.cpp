#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "wgfair/fincat.hpp"

using namespace wgfair;

namespace {

CategoryTable table_of(const CatPtr& c) { return to_table(*c); }

CatPtr free_arrow() { return poset_category(2, {{0, 1}}); }

FunctorMap constant_to(const CatPtr& src, const CatPtr& tgt, Obj o) {
    return FunctorMap::from_functions(src, tgt, [o](Obj) { return o; },
                                      [&](Mor) { return tgt->identity(o); });
}

// Objects iso to each other by brute force over the composition table.
bool brute_iso(const FinCat& c, Obj x, Obj y) {
    for (Mor f : c.hom(x, y))
        for (Mor g : c.hom(y, x))
            if (c.compose(g, f) == c.identity(x) && c.compose(f, g) == c.identity(y)) return true;
    return false;
}

}  // namespace

TEST_CASE("validate_category accepts small categories") {
    CHECK(validate_category(table_of(FinCat::discrete(3))).ok());
    CHECK(validate_category(table_of(free_arrow())).ok());
    CHECK(validate_category(table_of(cyclic_group_category(3))).ok());
    CHECK(validate_category(*FinCat::chaotic(4)).ok());
}

TEST_CASE("validate_category names a broken associativity triple") {
    auto t = table_of(cyclic_group_category(3));
    for (auto& e : t.compose)
        if (e[0] == 1 && e[1] == 1) e[2] = 0;
    auto r = validate_category(t);
    CHECK(r.structural.empty());
    REQUIRE_FALSE(r.laws.empty());
    CHECK(r.laws.front().find("associativity") != std::string::npos);
}

TEST_CASE("structural errors are distinct from law violations") {
    auto t = table_of(free_arrow());
    t.morphisms[2].tgt = 7;
    auto r = validate_category(t);
    CHECK_FALSE(r.structural.empty());
    CHECK(r.laws.empty());

    auto t2 = table_of(free_arrow());
    t2.compose.pop_back();
    auto r2 = validate_category(t2);
    CHECK_FALSE(r2.structural.empty());
    CHECK_THROWS_AS(build_category(t2), InputError);
}

TEST_CASE("iso_classes") {
    CHECK(iso_classes(*FinCat::discrete(2)).count == 2);
    CHECK(iso_classes(*FinCat::chaotic(2)).count == 1);
    // {a ≅ b} ⊔ {c}, built explicitly and compared to a brute-force scan.
    auto c = build_category(table_of(FinCat::make_equivalence({0, 0, 1})));
    auto ic = iso_classes(*c);
    CHECK(ic.count == 2);
    for (Obj x = 0; x < 3; ++x)
        for (Obj y = 0; y < 3; ++y) CHECK((ic.label[x] == ic.label[y]) == brute_iso(*c, x, y));
}

TEST_CASE("is_homotopically_discrete") {
    CHECK(is_homotopically_discrete(*FinCat::chaotic(2)).hd);
    auto z2 = cyclic_group_category(2);
    auto r = is_homotopically_discrete(*z2);
    CHECK_FALSE(r.hd);
    REQUIRE(r.witness);
    CHECK(*r.witness == 1);
    auto fa = is_homotopically_discrete(*free_arrow());
    CHECK_FALSE(fa.hd);
    CHECK(*fa.witness == 2);
}

TEST_CASE("discretize picks the minimal object of each class") {
    auto d = discretize(FinCat::chaotic(2));
    CHECK(d.Xd->num_objects() == 1);
    CHECK(d.gamma_prime.ob[0] == 0);

    auto disc = FinCat::discrete(3);
    auto dd = discretize(disc);
    for (Obj x = 0; x < 3; ++x) {
        CHECK(dd.gamma.ob[x] == x);
        CHECK(dd.gamma_prime.ob[x] == x);
    }

    auto c = FinCat::make_equivalence({1, 1, 0});
    auto d3 = discretize(c);
    CHECK(d3.Xd->num_objects() == 2);
    CHECK(functor_equal(compose(d3.gamma, d3.gamma_prime), FunctorMap::identity(d3.Xd)));
    CHECK(equivalence_flags(d3.gamma).is_equivalence);

    CHECK_THROWS_AS(discretize(cyclic_group_category(2)), InputError);
}

TEST_CASE("pullback over the terminal category is the product") {
    auto A = free_arrow();
    auto B = cyclic_group_category(2);
    auto T = FinCat::terminal();
    auto fp = pullback(constant_to(A, T, 0), constant_to(B, T, 0));
    CHECK(fp.cat->num_objects() == 2);
    CHECK(fp.cat->num_morphisms() == 3 * 2);
    CHECK(validate_category(*fp.cat).ok());
    CHECK(validate_functor(fp.projection(0)).empty());
    CHECK(validate_functor(fp.projection(1)).empty());
}

TEST_CASE("pullback along the identity recovers the other leg") {
    auto C = free_arrow();
    auto A = poset_category(3, {{0, 1}, {1, 2}});
    auto f = FunctorMap::from_functions(A, C, [](Obj x) { return x == 0 ? 0 : 1; });
    auto fp = pullback(f, FunctorMap::identity(C));
    CHECK(fp.cat->num_objects() == A->num_objects());
    CHECK(fp.cat->num_morphisms() == A->num_morphisms());
    for (Obj x = 0; x < A->num_objects(); ++x) {
        CHECK(fp.tuple(x)[0] == x);
        CHECK(fp.tuple(x)[1] == f.ob[x]);
    }
}

TEST_CASE("pullback over a discrete base splits fiberwise") {
    // A = A1 ⊔ A2 and B = B1 ⊔ B2 over a 2-object discrete D.
    auto A = FinCat::make_equivalence({0, 0, 1});  // fiber 0: {0,1}, fiber 1: {2}
    auto B = FinCat::make_equivalence({0, 1, 1});  // fiber 0: {0}, fiber 1: {1,2}
    auto D = FinCat::discrete(2);
    auto f = FunctorMap::from_functions(A, D, [](Obj x) { return x < 2 ? 0 : 1; });
    auto g = FunctorMap::from_functions(B, D, [](Obj x) { return x == 0 ? 0 : 1; });
    auto fp = pullback(f, g);
    // Direct enumeration oracle.
    std::size_t objects = 0, morphisms = 0;
    for (Obj a = 0; a < 3; ++a)
        for (Obj b = 0; b < 3; ++b)
            if (f.ob[a] == g.ob[b]) ++objects;
    for (Obj a = 0; a < 3; ++a)
        for (Obj b = 0; b < 3; ++b)
            for (Obj a2 = 0; a2 < 3; ++a2)
                for (Obj b2 = 0; b2 < 3; ++b2)
                    if (f.ob[a] == g.ob[b] && f.ob[a2] == g.ob[b2])
                        morphisms += A->hom_size(a, a2) * B->hom_size(b, b2);
    CHECK(fp.cat->num_objects() == static_cast<Obj>(objects));
    CHECK(fp.cat->num_morphisms() == static_cast<Mor>(morphisms));
    CHECK(chain_pullback_size({A, B}, {f}, {g}) == objects);
}

TEST_CASE("equivalence_flags") {
    auto C = free_arrow();
    auto id = equivalence_flags(FunctorMap::identity(C));
    CHECK(id.fully_faithful);
    CHECK(id.essentially_surjective);
    CHECK(id.injective_on_objects);
    CHECK(id.is_equivalence);

    auto ch = FinCat::chaotic(2);
    auto T = FinCat::terminal();
    auto fl = equivalence_flags(constant_to(ch, T, 0));
    CHECK(fl.is_equivalence);
    CHECK_FALSE(fl.injective_on_objects);

    auto e = equivalence_flags(FunctorMap::from_functions(FinCat::empty(), T, [](Obj) { return 0; }));
    CHECK_FALSE(e.essentially_surjective);
    CHECK(e.fully_faithful);

    auto z = equivalence_flags(constant_to(cyclic_group_category(2), T, 0));
    CHECK_FALSE(z.fully_faithful);
}

TEST_CASE("boff_factorize") {
    auto C = free_arrow();
    auto r = boff_factorize(FunctorMap::identity(C));
    CHECK(r.L->num_objects() == 2);
    CHECK(r.L->num_morphisms() == 3);
    CHECK(functor_equal(compose(r.g, r.v), FunctorMap::identity(C)));

    auto ch = FinCat::chaotic(2);
    auto T = FinCat::terminal();
    auto f = constant_to(ch, T, 0);
    auto b = boff_factorize(f);
    for (Obj x = 0; x < 2; ++x)
        for (Obj y = 0; y < 2; ++y) CHECK(b.L->hom_size(x, y) == T->hom_size(f.ob[x], f.ob[y]));
    CHECK(equivalence_flags(b.g).is_equivalence);

    auto e = boff_factorize(FunctorMap::from_functions(FinCat::empty(), T, [](Obj) { return 0; }));
    CHECK(e.L->num_objects() == 0);
    CHECK(equivalence_flags(e.g).fully_faithful);

    // Non-thin target: the point into Z/2 gets the whole group as endomorphisms.
    auto z2 = cyclic_group_category(2);
    auto pt = constant_to(FinCat::terminal(), z2, 0);
    auto bz = boff_factorize(pt);
    CHECK(bz.L->num_morphisms() == 2);
    CHECK(validate_category(*bz.L).ok());
    CHECK(functor_equal(compose(bz.g, bz.v), pt));
    CHECK(equivalence_flags(bz.g).fully_faithful);
}

TEST_CASE("boff_factorize laws on random monotone maps between posets") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        Obj n = 1 + static_cast<Obj>(rng() % 4), m = 1 + static_cast<Obj>(rng() % 4);
        auto A = poset_category(n, [&] {
            std::vector<std::pair<Obj, Obj>> g;
            for (Obj i = 0; i + 1 < n; ++i) g.push_back({i, i + 1});
            return g;
        }());
        auto B = poset_category(m, [&] {
            std::vector<std::pair<Obj, Obj>> g;
            for (Obj i = 0; i + 1 < m; ++i)
                if (rng() % 2) g.push_back({i, i + 1});
            return g;
        }());
        // A monotone map into a chain-like B: non-decreasing values along B's order.
        std::vector<Obj> vals(n);
        Obj start = static_cast<Obj>(rng() % m);
        for (Obj i = 0; i < n; ++i) vals[i] = start;
        auto f = FunctorMap::from_functions(A, B, [&](Obj x) { return vals[x]; });
        REQUIRE(validate_functor(f).empty());
        auto r = boff_factorize(f);
        CHECK(functor_equal(compose(r.g, r.v), f));
        CHECK(equivalence_flags(r.g).fully_faithful);
        CHECK(r.L->num_objects() == A->num_objects());
        CHECK(validate_category(*r.L).ok());
    }
}

TEST_CASE("retraction_pseudo_inverse") {
    auto C = free_arrow();
    auto r = retraction_pseudo_inverse(FunctorMap::identity(C));
    CHECK(functor_equal(r.backward, FunctorMap::identity(C)));

    auto ch = FinCat::chaotic(2);
    auto inc = FunctorMap::from_functions(FinCat::terminal(), ch, [](Obj) { return 0; });
    auto rr = retraction_pseudo_inverse(inc);
    CHECK(rr.backward.ob[1] == 0);
    CHECK(rr.counit.comp[1] == ch->thin_hom(0, 1));
    CHECK(rr.counit.comp[0] == ch->identity(0));
    CHECK(functor_equal(compose(rr.backward, inc), FunctorMap::identity(FinCat::terminal())));
    CHECK(validate_nat(rr.counit).empty());
    CHECK(rr.counit.iso);

    CHECK_THROWS_AS(retraction_pseudo_inverse(constant_to(ch, FinCat::terminal(), 0)), InputError);
}

TEST_CASE("validate_functor rejects a non-functor") {
    auto z2 = cyclic_group_category(2);
    FunctorMap f;
    f.source = z2;
    f.target = z2;
    f.ob = {0};
    f.mor = {1, 1};  // identity not preserved
    CHECK_FALSE(validate_functor(f).empty());
}

TEST_CASE("p preserves pullbacks over discrete objects") {
    auto A = FinCat::make_equivalence({0, 0, 1, 2, 2});
    auto B = FinCat::make_equivalence({5, 6, 6});
    auto D = FinCat::discrete(2);
    auto f = FunctorMap::from_functions(A, D, [](Obj x) { return x < 3 ? 0 : 1; });
    auto g = FunctorMap::from_functions(B, D, [](Obj x) { return x == 0 ? 0 : 1; });
    auto fp = pullback(f, g);
    std::size_t expected = 0;
    for (Obj a = 0; a < A->num_iso_classes(); ++a)
        for (Obj b = 0; b < B->num_iso_classes(); ++b)
            if (f.ob[A->class_members(a).front()] == g.ob[B->class_members(b).front()]) ++expected;
    CHECK(fp.cat->num_iso_classes() == static_cast<Obj>(expected));
}

TEST_CASE("full subcategories and restricted functors") {
    auto C = poset_category(3, {{0, 1}, {1, 2}});
    auto sub = full_subcategory(C, {2, 0});
    CHECK(sub.cat->num_objects() == 2);
    CHECK(sub.cat->hom_size(1, 0) == 1);  // 0 <= 2
    CHECK(sub.cat->hom_size(0, 1) == 0);
    CHECK(sub.index[1] == -1);
    CHECK(validate_functor(sub.inclusion).empty());

    auto z2 = cyclic_group_category(2);
    auto zsub = full_subcategory(z2, {0});
    CHECK(zsub.cat->num_morphisms() == 2);
    CHECK(validate_functor(zsub.inclusion).empty());

    auto ch = FinCat::make_equivalence({0, 0, 1, 1});
    auto s1 = full_subcategory(ch, {0, 1});
    auto s2 = full_subcategory(ch, {1, 3});
    auto swap = FunctorMap::from_functions(ch, ch, [](Obj x) { return x ^ 1; });
    auto r = restrict_functor(swap, s1, full_subcategory(ch, {1, 0}));
    CHECK(r.ob == std::vector<Obj>{0, 1});
    CHECK_THROWS(restrict_functor(swap, s1, s2));
}

TEST_CASE("retraction_with_choice honours the prescribed counit") {
    auto ch = FinCat::chaotic(3);
    auto inc = FunctorMap::from_functions(FinCat::terminal(), ch, [](Obj) { return 1; });
    auto r = retraction_with_choice(inc, {0, 0, 0},
                                    {ch->thin_hom(1, 0), ch->identity(1), ch->thin_hom(1, 2)});
    CHECK(validate_nat(r.counit).empty());
    CHECK_THROWS(retraction_with_choice(inc, {0, 0, 0},
                                        {ch->thin_hom(1, 0), ch->thin_hom(1, 1), ch->thin_hom(2, 2)}));

    // Explicit target: the morphism action comes from the counit by conjugation.
    auto z2 = cyclic_group_category(2);
    auto idz = FunctorMap::identity(z2);
    auto rz = retraction_with_choice(idz, {0}, {0});
    CHECK(rz.backward.mor == std::vector<Mor>{0, 1});
}
