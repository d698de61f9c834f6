#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wgfair/comparison.hpp"

using namespace wgfair;

namespace {

SitePtr fat4() {
    static SitePtr s = make_fat_site({4, 3});
    return s;
}

SitePtr delta3() {
    static SitePtr s = make_delta_site(3);
    return s;
}

int object_named(const std::string& name) { return fat4()->find_object(name); }

CatPtr free_arrow() { return poset_category(2, {{0, 1}}); }

// Surjection {a, a', b} -> {0 -> 1}; X0 has a non-trivial isomorphism a ~ a'.
SurjectionInstance free_arrow_instance() { return generate_from_surjection(free_arrow(), {0, 0, 1}); }

// Composable chains of length k in B, counted from the source/target tables.
std::size_t chains(const FinCat& B, int k) {
    std::vector<std::size_t> ending(B.num_objects(), 1);
    for (int step = 0; step < k; ++step) {
        std::vector<std::size_t> next(B.num_objects(), 0);
        for (Mor f = 0; f < B.num_morphisms(); ++f) next[B.tgt(f)] += ending[B.src(f)];
        ending = next;
    }
    std::size_t n = 0;
    for (auto c : ending) n += c;
    return n;
}

struct BudgetGuard {
    std::size_t saved = object_budget();
    explicit BudgetGuard(std::size_t n) { set_object_budget(n); }
    ~BudgetGuard() { set_object_budget(saved); }
};

}  // namespace

TEST_CASE("F2 of the terminal double category is the terminal fair 2-category") {
    auto f = F2(terminal_double(), Strategy::Cleavage, fat4());
    for (const auto& c : f.fair.diagram.level) {
        CHECK(c->num_objects() == 1);
        CHECK(c->num_morphisms() == 1);
    }
    CHECK(check_F2(terminal_double(), f).ok());
}

TEST_CASE("F2 of a category is the strict fair structure on it") {
    for (auto B : {free_arrow(), poset_category(3, {{0, 1}, {1, 2}}), cyclic_group_category(3)}) {
        auto x = category_instance(B);
        for (auto s : {Strategy::Cleavage, Strategy::Retraction}) {
            auto f = F2(x, s, fat4());
            auto c = check_F2(x, f);
            CHECK(c.ok());
            const auto& p = f.fair.p;
            CHECK(p.O->is_discrete());
            CHECK(p.O->num_objects() == B->num_objects());
            CHECK(p.U->num_objects() == B->num_objects());
            // Colored edges add nothing: "o=o-o" has one arrow's worth of data.
            CHECK(static_cast<std::size_t>(f.fair.diagram.level[object_named("o-o-o")]->num_objects()) ==
                  chains(*B, 2));
            CHECK(static_cast<std::size_t>(f.fair.diagram.level[object_named("o=o-o")]->num_objects()) ==
                  chains(*B, 1));
            auto direct = build_fair(fair_category_instance(B), fat4());
            for (int k = 0; k < fat4()->num_objects(); ++k)
                CHECK(f.fair.diagram.level[k]->num_objects() == direct.diagram.level[k]->num_objects());
        }
    }
}

TEST_CASE("F2 of the surjection family under the cleavage strategy") {
    auto s = free_arrow_instance();
    auto f = F2(s.x, Strategy::Cleavage, fat4());
    auto c = check_F2(s.x, f);
    CHECK(c.fair.ok());
    CHECK(c.pi1_isomorphic);
    CHECK(c.hom_fibers.ok());
    CHECK(c.hom_fibers.checked == 4);
    auto pf = pi1_fair(f.fair.p);
    REQUIRE(pf.cat);
    CHECK(pf.cat->num_objects() == 2);
    CHECK(pf.cat->num_morphisms() == 3);
    // O is the discretization of X0.
    CHECK(f.fair.p.O->num_objects() == 2);
    CHECK(f.fair.p.O == f.composition.disc.Xd);

    auto g = generate_from_surjection(cyclic_group_category(2), {0, 0, 0});
    CHECK(check_F2(g.x, F2(g.x, Strategy::Cleavage, fat4())).ok());
}

TEST_CASE("F2 under the retraction strategy loses strict associativity when X0 is not discrete") {
    auto s = free_arrow_instance();
    CHECK_THROWS_AS(F2(s.x, Strategy::Retraction, fat4()), LawViolation);
    auto dc = discrete_composition(s.x, Strategy::Retraction);
    // The chosen retraction still sends unit pairs to unit composites.
    for (Obj v = 0; v < s.x.X0->num_objects(); ++v)
        for (Obj w = 0; w < s.x.X0->num_objects(); ++w) {
            Obj q = dc.pairs.find({s.x.s0(v), s.x.s0(w)});
            if (q < 0) continue;
            Obj c = dc.compA(q);
            CHECK(c == s.x.s0(s.x.d1(c)));
            CHECK(s.x.X1->iso_class(dc.compA(q)) == s.x.X1->iso_class(s.x.s0(v)));
        }
}

TEST_CASE("F2 sends the collapse onto the base to a 2-equivalence") {
    auto s = free_arrow_instance();
    auto base = category_instance(free_arrow());
    auto m = collapse_to_base(s, base);
    auto fx = F2(s.x, Strategy::Cleavage, fat4());
    auto fb = F2(base, Strategy::Cleavage, fat4());
    auto fm = F2_morphism(fx, fb, m);
    CHECK(validate_fair_morphism(fx.fair.p, fb.fair.p, fm).empty());
    CHECK(is_2equivalence_fair(fx.fair.p, fb.fair.p, fm).holds());
    CHECK(fm.FO.source->num_objects() == 2);
}

TEST_CASE("pi* evaluates a double category at pi-images") {
    for (auto x : {free_arrow_instance().x, cyclic_double(), terminal_double()}) {
        auto d = build_fair(pi_star(x), fat4());
        CHECK(d.functoriality.ok());
        CHECK(d.functoriality.checked == 1502);
        auto n = make_nerve(x, delta3());
        CHECK(check_pi_star(d, n).ok());
        CHECK(validate_fairwg(d).ok());
        CHECK(d.diagram.level[object_named("o=o")]->num_objects() == x.X0->num_objects());
        CHECK(d.diagram.level[object_named("o")] == x.X0);

        auto disc = discretize(x.X0);
        auto t = tilde_pi_star(n, disc, fat4());
        CHECK(t.level[object_named("o")] == disc.Xd);
        CHECK(t.level[object_named("o=o")] == x.X0);
        CHECK(t.level[object_named("o-o-o")] == n.levels.level[2]);
        CHECK(check_strict_functoriality(t).ok());
    }
}

TEST_CASE("S2 on a category instance is a strict comparison") {
    auto x = category_instance(poset_category(3, {{0, 1}, {1, 2}}));
    auto f = F2(x, Strategy::Cleavage, fat4());
    auto r = S2(x, f, Strategy::Cleavage, make_nerve(x, delta3()));
    CHECK(r.ok());
    CHECK(r.naturality.checked == static_cast<std::size_t>(fat4()->num_arrows()));
}

TEST_CASE("S2 on the surjection family: sections and equivalences hold, edge faces do not commute") {
    auto s = free_arrow_instance();
    auto f = F2(s.x, Strategy::Cleavage, fat4());
    auto r = S2(s.x, f, Strategy::Cleavage, make_nerve(s.x, delta3()));
    CHECK(r.section.ok());
    CHECK(r.equivalences.ok());
    CHECK(r.transported.ok());
    const int edge = object_named("o-o");
    CHECK(functor_equal(r.S[edge], FunctorMap::identity(f.fair.diagram.level[edge])));
    CHECK(functor_equal(r.z[edge], FunctorMap::identity(f.fair.diagram.level[edge])));
    auto fz = equivalence_flags(r.z[object_named("o=o-o")]);
    CHECK(fz.is_equivalence);
    CHECK(fz.injective_on_objects);
    // The faces of "o-o-o" in F2X are projections of pairs over the
    // classes; S would have to fix non-strict pairs, which it cannot.
    CHECK_FALSE(r.naturality.ok());
}

TEST_CASE("ChainStrictifier returns isomorphic strict chains") {
    auto s = free_arrow_instance();
    auto n = make_nerve(s.x, delta3());
    auto dc = discrete_composition(s.x, Strategy::Cleavage);
    ChainStrictifier cs(s.x, dc, Strategy::Cleavage, n);
    const auto& A = *s.x.X1;
    std::size_t seen = 0;
    for (Obj q = 0; q < dc.pairs.cat->num_objects(); ++q) {
        const Obj* t = dc.pairs.tuple(q);
        Obj o = cs.ob({t[0], t[1]});
        const Obj* st = n.levels.product[2].tuple(o);
        CHECK(A.iso_class(st[0]) == A.iso_class(t[0]));
        CHECK(A.iso_class(st[1]) == A.iso_class(t[1]));
        CHECK(s.x.d0(st[0]) == s.x.d1(st[1]));
        ++seen;
    }
    CHECK(seen > 0);
}

TEST_CASE("alpha and beta on every window object") {
    auto s = free_arrow_instance();
    auto f = F2(s.x, Strategy::Cleavage, fat4());
    const auto& ev = *f.fair.eval;
    for (const auto& u : fat4()->fat_objects) {
        auto ab = alphabeta(ev, u);
        auto c = check_alphabeta(ev, ab);
        CHECK_MESSAGE(c.ok(), u.str() << ": " << c.witness);
        if (u.is_plain()) {
            CHECK(functor_equal(ab.alpha, FunctorMap::identity(ev.level(u))));
            CHECK(functor_equal(ab.beta, FunctorMap::identity(ev.level(u))));
        }
    }
    // "o=o": beta is the endpoint of a unit, alpha the minimal unit over a class.
    auto ab = alphabeta(ev, ColoredOrdinal::ze(1));
    CHECK(ab.beta.target == f.fair.p.O);
    for (Obj c = 0; c < f.fair.p.O->num_objects(); ++c) CHECK(f.fair.p.srcU(ab.alpha(c)) == c);

    auto pistar = build_fair(pi_star(s.x), fat4());
    CHECK_THROWS_AS(alphabeta(*pistar.eval, ColoredOrdinal::ze(1)), InputError);
}

TEST_CASE("T2 of a category is strict and independent of the lift") {
    auto B = poset_category(3, {{0, 1}, {1, 2}});
    auto y = build_fair(fair_category_instance(B), fat4());
    auto t = T2(y, delta3());
    CHECK(t.ok());
    CHECK(t.arrows_with_several_lifts > 0);
    CHECK(t.lift_independence.checked > 0);
    CHECK(check_strict_functoriality(t.diagram).ok());
    for (int k = 0; k < 4; ++k) CHECK(static_cast<std::size_t>(t.diagram.level[k]->num_objects()) == chains(*B, k));
    // Some canonical lifts leave the window; they are evaluated lazily.
    bool beyond = false;
    for (const auto& l : t.lift) beyond = beyond || l.tgt.dots > 4;
    CHECK(beyond);
}

TEST_CASE("T2 of F2 of the surjection family") {
    auto s = free_arrow_instance();
    auto f = F2(s.x, Strategy::Cleavage, fat4());
    auto t = T2(f.fair, delta3());
    CHECK(t.coherence.ok());
    CHECK(t.mono_strict.ok());
    CHECK(t.segal.ok());
    CHECK(t.diagram.level[0]->is_discrete());
    // Composing with an inserted unit returns the normalized arrow, not the
    // arrow itself, so lifts through colored edges disagree.
    CHECK_FALSE(t.lift_independence.ok());
}

TEST_CASE("R2 of the terminal fair 2-category is terminal up to 2-equivalence") {
    auto y = build_fair(fair_category_instance(FinCat::terminal()), fat4());
    auto r = R2(y, delta3());
    REQUIRE(r.x);
    CHECK(r.ok());
    auto e = two_equivalence(hom_data(*r.x), hom_data(terminal_double()),
                             FunctorMap::from_functions(r.x->X0, terminal_double().X0, [](Obj) { return 0; }),
                             FunctorMap::from_functions(r.x->X1, terminal_double().X1, [](Obj) { return 0; }));
    CHECK(e.holds());
}

TEST_CASE("R2 of a category and strictification checks") {
    auto B = free_arrow();
    auto y = build_fair(fair_category_instance(B), fat4());
    auto r = R2(y, delta3());
    REQUIRE(r.x);
    CHECK(r.ok());
    CHECK(r.checks.gv_equals_h.ok());
    CHECK(r.checks.g_equivalences.ok());
    CHECK(r.checks.L_strict.ok());
    CHECK(r.checks.L_segal.ok());
    CHECK(check_g_naturality(r.t2.diagram, r.st).ok());
    auto p = pi1_double(*r.x);
    REQUIRE(p.cat);
    CHECK(p.cat->num_objects() == 2);
    CHECK(p.cat->num_morphisms() == 3);
}

TEST_CASE("R2 F2 X -> X is a levelwise equivalence") {
    std::vector<WGDouble> xs{terminal_double(), category_instance(free_arrow()), free_arrow_instance().x,
                             cyclic_double()};
    for (const auto& x : xs) {
        auto r = roundtrip_x(x, Strategy::Cleavage, delta3(), fat4());
        CHECK_MESSAGE(r.ok(), r.error);
        CHECK(r.map.equivalences.checked == 4);
        CHECK(r.two_equivalence.holds());
    }
    auto r = roundtrip_x(category_instance(free_arrow()), Strategy::Retraction, delta3(), fat4());
    CHECK(r.ok());
}

TEST_CASE("fair zig-zag through the strictification of F2 R2 Y") {
    for (auto B : {FinCat::terminal(), free_arrow()}) {
        auto y = build_fair(fair_category_instance(B), fat4());
        auto r = roundtrip_y(y, Strategy::Cleavage, delta3(), fat4());
        CHECK_MESSAGE(r.ok(), r.error);
        CHECK(r.st_fairwg.ok());
        CHECK(r.st_checks.h_tuple.ok());
        CHECK(r.leg_to_z.holds());
        CHECK(r.leg_to_y.holds());
    }
}

TEST_CASE("round trips report budget exhaustion instead of failing hard") {
    BudgetGuard guard(2000);
    auto y = build_fair(fair_category_instance(free_arrow()), fat4());
    auto r = roundtrip_y(y, Strategy::Cleavage, delta3(), fat4());
    CHECK_FALSE(r.ok());
    CHECK(r.error.find("budget") != std::string::npos);
}

TEST_CASE("hom data read off a fair diagram matches its presentation") {
    for (auto B : {free_arrow(), cyclic_group_category(3)}) {
        auto p = fair_category_instance(B);
        auto d = build_fair(p, fat4());
        auto e = two_equivalence(diagram_hom_data(d.diagram), fair_hom_data(p), FunctorMap::identity(p.O),
                                 FunctorMap::identity(p.A));
        CHECK(e.holds());
        auto rep = validate_fair_diagram(d.diagram, false);
        CHECK(rep.ok());
        CHECK(rep.presentation.checked == 0);
    }
}
