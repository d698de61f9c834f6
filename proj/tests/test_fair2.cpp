#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wgfair/fair2.hpp"

using namespace wgfair;

namespace {

SitePtr fat4() {
    static SitePtr s = make_fat_site({4, 3});
    return s;
}

int object_named(const std::string& name) { return fat4()->find_object(name); }

// Composable pairs (f, g) of B counted straight from the source/target tables.
std::size_t composable_pairs(const FinCat& B) {
    std::size_t n = 0;
    for (Mor f = 0; f < B.num_morphisms(); ++f)
        for (Mor g = 0; g < B.num_morphisms(); ++g)
            if (B.tgt(f) == B.src(g)) ++n;
    return n;
}

FairPresentation no_units() {
    FairPresentation p;
    p.O = FinCat::discrete(1);
    p.A = FinCat::discrete(1);
    p.U = FinCat::empty();
    p.srcA = FunctorMap::from_functions(p.A, p.O, [](Obj) { return 0; });
    p.tgtA = p.srcA;
    p.srcU = FunctorMap::from_functions(p.U, p.O, [](Obj) { return 0; });
    p.u = FunctorMap::from_functions(p.U, p.A, [](Obj) { return 0; });
    build_pairs(p);
    p.compA = FunctorMap::from_functions(p.pairsA.cat, p.A, [](Obj) { return 0; });
    p.compU = FunctorMap::from_functions(p.pairsU.cat, p.U, [](Obj) { return 0; });
    return p;
}

}  // namespace

TEST_CASE("terminal fair 2-category is terminal at every level") {
    auto d = build_fair(fair_category_instance(FinCat::terminal()), fat4());
    CHECK(d.functoriality.ok());
    CHECK(d.functoriality.checked == 1502);
    for (const auto& c : d.diagram.level) {
        CHECK(c->num_objects() == 1);
        CHECK(c->num_morphisms() == 1);
    }
    CHECK(validate_fair2(d).ok());
    CHECK(validate_fairwg(d).ok());
}

TEST_CASE("a category as a fair 2-category") {
    for (auto B : {poset_category(3, {{0, 1}, {1, 2}}), cyclic_group_category(3), poset_category(2, {{0, 1}})}) {
        auto p = fair_category_instance(B);
        auto d = build_fair(p, fat4());
        CHECK(d.functoriality.ok());
        CHECK(static_cast<std::size_t>(d.diagram.level[object_named("o-o-o")]->num_objects()) ==
              composable_pairs(*B));
        auto r = validate_fair2(d);
        CHECK(r.ok());
        CHECK(r.generator_maps.checked == 5);
        for (int a : generator_arrows(*fat4())) CHECK(is_isomorphism(d.diagram.act[a]));
        auto pi = pi1_fair(p);
        REQUIRE(pi.cat);
        CHECK(pi.cat->num_objects() == B->num_objects());
        CHECK(pi.cat->num_morphisms() == B->num_morphisms());
        CHECK(validate_category(*pi.cat).ok());
        CHECK(is_2equivalence_fair(p, p, identity_fair_morphism(p)).holds());
        CHECK(validate_fair_morphism(p, p, identity_fair_morphism(p)).empty());
    }
}

TEST_CASE("missing units make U -> O fail") {
    auto d = build_fair(no_units(), fat4());
    auto r = validate_fair2(d);
    CHECK_FALSE(r.generator_maps.ok());
    CHECK(r.generator_maps.failures.front().find("U -> O") != std::string::npos);
    CHECK_FALSE(pi1_fair(no_units()).problems.empty());
}

TEST_CASE("a non-groupoid object category fails homotopical discreteness") {
    auto p = fair_category_instance(FinCat::discrete(2));
    p.O = poset_category(2, {{0, 1}});
    p.srcA.target = p.O;
    p.tgtA.target = p.O;
    p.srcU.target = p.O;
    p.srcU.source = p.U;
    build_pairs(p);
    p.compA.source = p.pairsA.cat;
    p.compU.source = p.pairsU.cat;
    auto d = build_fair(p, fat4());
    CHECK_FALSE(validate_fairwg(d).discrete.ok());
}

TEST_CASE("discretization is the identity on fair 2-categories") {
    auto p = fair_category_instance(poset_category(2, {{0, 1}}));
    auto r = discretize_fair(p, Strategy::Cleavage);
    CHECK(r.identity);
    CHECK(r.p.compA.ob == p.compA.ob);
    CHECK(r.p.O == p.O);
}

TEST_CASE("presentation laws catch a broken composition") {
    auto p = fair_category_instance(poset_category(3, {{0, 1}, {1, 2}}));
    // Send every composite to its first factor.
    for (Obj q = 0; q < p.pairsA.cat->num_objects(); ++q) p.compA.ob[q] = p.pairsA.tuple(q)[0];
    CHECK_FALSE(validate_presentation(p).ok());
    CHECK_THROWS_AS(build_fair(p, fat4()), LawViolation);
}
