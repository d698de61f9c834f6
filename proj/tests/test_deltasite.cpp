#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "wgfair/deltasite.hpp"
#include "wgfair/fincat.hpp"

using namespace wgfair;

namespace {

ColoredOrdinal co(const char* s) { return ColoredOrdinal::parse(s); }

// Brute-force hom enumeration: every function on dots, filtered by the validator.
std::size_t brute_hom(const ColoredOrdinal& a, const ColoredOrdinal& b) {
    std::size_t total = 0;
    std::vector<int> d(a.dots, 0);
    while (true) {
        if (!validate_fat_map(FatMap{a, b, d})) ++total;
        int i = 0;
        while (i < a.dots && ++d[i] == b.dots) d[i++] = 0;
        if (i == a.dots) break;
    }
    return total;
}

const TruncationWindow kWindow{};

}  // namespace

TEST_CASE("epi_mono_factor_delta examples") {
    auto id = epi_mono_factor_delta(SimplexMap::identity(2));
    CHECK(id.eta == SimplexMap::identity(2));
    CHECK(id.eps == SimplexMap::identity(2));

    auto collapse = epi_mono_factor_delta(SimplexMap{1, 0, {0, 0}});
    CHECK(collapse.eta == SimplexMap{1, 0, {0, 0}});
    CHECK(collapse.eps == SimplexMap::identity(0));

    auto f = epi_mono_factor_delta(SimplexMap{2, 2, {0, 0, 2}});
    CHECK(f.eta == SimplexMap{2, 1, {0, 0, 1}});
    CHECK(f.eps == SimplexMap{1, 2, {0, 2}});
}

TEST_CASE("epi-mono factorization exists and is unique on the window") {
    for (const auto& f : window_simplex_maps(kWindow)) {
        auto em = epi_mono_factor_delta(f);
        CHECK(em.eta.is_epi());
        CHECK(em.eps.is_mono());
        CHECK(compose(em.eps, em.eta) == f);
        int count = 0;
        for (int r = 0; r <= f.tgt; ++r)
            for (const auto& e : enumerate_simplex_maps(f.src, r))
                for (const auto& m : enumerate_simplex_maps(r, f.tgt))
                    if (e.is_epi() && m.is_mono() && compose(m, e) == f) ++count;
        CHECK(count == 1);
    }
}

TEST_CASE("colored ordinal notation") {
    CHECK(co("o=o-o").str() == "o=o-o");
    CHECK(co("o").dots == 1);
    CHECK_THROWS_AS(co("o=o-"), InputError);
    CHECK_THROWS_AS(co("o+o"), InputError);
    CHECK(ColoredOrdinal::ze(2).str() == "o=o=o");
    auto x = co("o=o-o=o=o");
    CHECK(x.rank() == 1);
    CHECK(x.top_of_class(0) == 1);
    CHECK(x.bottom_of_class(1) == 2);
    CHECK(x.top_of_class(1) == 4);
    CHECK(window_objects(kWindow).size() == 15);
}

TEST_CASE("fat map notation round-trips") {
    auto f = FatMap::parse("o-o:o=o-o:0>0,1>2");
    CHECK(f.dotmap == std::vector<int>{0, 2});
    CHECK(f.str() == "o-o:o=o-o:0>0,1>2");
    CHECK(FatMap::parse_dotmap("0>0,1>2") == std::vector<int>{0, 2});
    CHECK_THROWS_AS(FatMap::parse_dotmap("1>0"), InputError);
    CHECK_THROWS_AS(FatMap::parse("o:o"), InputError);
}

TEST_CASE("validate_fat_map") {
    CHECK_FALSE(validate_fat_map(FatMap{co("o"), co("o=o"), {0}}));
    CHECK_FALSE(validate_fat_map(FatMap{co("o"), co("o=o"), {1}}));
    auto err = validate_fat_map(FatMap{co("o=o"), co("o-o-o"), {0, 2}});
    REQUIRE(err);
    CHECK(err->find("plain target edge 0") != std::string::npos);
    auto err2 = validate_fat_map(FatMap{co("o=o"), co("o=o-o"), {0, 2}});
    REQUIRE(err2);
    CHECK(err2->find("plain target edge 1") != std::string::npos);
    // Plain source edges may sit over colored target edges.
    CHECK_FALSE(validate_fat_map(FatMap{co("o-o"), co("o=o"), {0, 1}}));
    CHECK(validate_fat_map(FatMap{co("o-o"), co("o-o"), {1, 0}}));

    FatMap a{co("o"), co("o=o"), {1}};
    FatMap b{co("o=o"), co("o=o-o"), {0, 1}};
    auto ba = compose(b, a);
    CHECK(ba.dotmap == std::vector<int>{1});
    CHECK_FALSE(validate_fat_map(ba));
}

TEST_CASE("pi on objects and maps") {
    CHECK(pi_object(co("o=o=o")) == 0);
    CHECK(pi_object(co("o=o-o=o")) == 1);
    CHECK(pi_map(FatMap{co("o-o"), co("o=o"), {0, 1}}) == SimplexMap{1, 0, {0, 0}});
}

TEST_CASE("enumerate_hom counts") {
    CHECK(enumerate_hom(co("o"), co("o=o")).size() == 2);
    CHECK(enumerate_hom(co("o-o"), co("o-o-o")).size() == 3);
    CHECK(enumerate_hom(co("o=o"), co("o-o-o")).empty());
    auto objs = window_objects(kWindow);
    for (const auto& a : objs)
        for (const auto& b : objs) {
            auto h = enumerate_hom(a, b);
            CHECK(h.size() == brute_hom(a, b));
            CHECK(std::is_sorted(h.begin(), h.end()));
        }
}

TEST_CASE("Segal hom bijection on the window") {
    auto objs = window_objects(kWindow);
    for (const auto& k : objs)
        for (const auto& r : objs) {
            auto c = segal_hom_count(k, r);
            CHECK(c.direct == c.edgewise);
        }
}

TEST_CASE("pi is functorial and composition stays valid") {
    auto objs = window_objects(kWindow);
    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& c : objs)
                for (const auto& f : enumerate_hom(a, b))
                    for (const auto& g : enumerate_hom(b, c)) {
                        auto gf = compose(g, f);
                        CHECK_FALSE(validate_fat_map(gf));
                        CHECK(pi_map(gf) == compose(pi_map(g), pi_map(f)));
                    }
}

TEST_CASE("random composition chains keep the color condition") {
    std::mt19937 rng(11);
    TruncationWindow big{6, 3};
    auto objs = window_objects(big);
    for (int trial = 0; trial < 200; ++trial) {
        ColoredOrdinal cur = objs[rng() % objs.size()];
        FatMap acc = FatMap::identity(cur);
        for (int step = 0; step < 5; ++step) {
            std::vector<FatMap> options;
            for (const auto& t : objs)
                for (auto& h : enumerate_hom(cur, t)) options.push_back(h);
            if (options.empty()) break;
            const FatMap& g = options[rng() % options.size()];
            acc = compose(g, acc);
            cur = g.tgt;
            CHECK_FALSE(validate_fat_map(acc));
        }
    }
}

TEST_CASE("epi_mono_lift_fat") {
    auto id = epi_mono_lift_fat(FatMap::identity(co("o=o-o")));
    CHECK(id.eta == FatMap::identity(co("o=o-o")));
    CHECK(id.eps == FatMap::identity(co("o=o-o")));

    FatMap f{co("o-o"), co("o=o"), {0, 1}};
    auto l = epi_mono_lift_fat(f);
    CHECK(l.eta.tgt == co("o=o"));
    CHECK(l.eta == f);
    CHECK(l.eps == FatMap::identity(co("o=o")));

    FatMap g{co("o-o"), co("o=o-o"), {0, 2}};
    auto lg = epi_mono_lift_fat(g);
    CHECK(lg.eta.tgt == co("o-o"));
    CHECK(compose(lg.eps, lg.eta) == g);

    auto objs = window_objects(kWindow);
    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& h : enumerate_hom(a, b)) {
                auto em = epi_mono_lift_fat(h);
                auto pf = epi_mono_factor_delta(pi_map(h));
                CHECK_FALSE(validate_fat_map(em.eta));
                CHECK_FALSE(validate_fat_map(em.eps));
                CHECK(compose(em.eps, em.eta) == h);
                CHECK(pi_map(em.eta) == pf.eta);
                CHECK(pi_map(em.eps) == pf.eps);
            }
}

TEST_CASE("nu_un") {
    CHECK(nu_un(2, co("o-o-o")) == FatMap::identity(co("o-o-o")));
    CHECK(nu_un(0, co("o=o")).dotmap == std::vector<int>{1});
    auto n = nu_un(1, co("o=o-o"));
    CHECK(n.dotmap == std::vector<int>{1, 2});
    CHECK(pi_map(n) == SimplexMap::identity(1));
    CHECK_THROWS_AS(nu_un(1, co("o=o")), InputError);
    for (const auto& u : window_objects(kWindow)) {
        auto s = nu_un(u.rank(), u);
        CHECK_FALSE(validate_fat_map(s));
        CHECK(pi_map(s) == SimplexMap::identity(u.rank()));
    }
}

TEST_CASE("nu square commutes exactly for lifts that keep class tops") {
    CHECK_FALSE(nu_square_commutes(FatMap{co("o"), co("o=o"), {0}}));
    CHECK(nu_square_commutes(FatMap{co("o"), co("o=o"), {1}}));
    auto objs = window_objects(kWindow);
    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& e : enumerate_hom(a, b)) {
                if (!pi_map(e).is_mono()) continue;
                CHECK(nu_square_commutes(e) == preserves_class_tops(e));
            }
}

TEST_CASE("pushout_fat examples") {
    auto idspan = pushout_fat(nu_un(1, co("o=o-o")), FatMap::identity(co("o-o")), 4);
    CHECK(idspan.object == co("o=o-o"));
    CHECK(idspan.universal);

    auto ze2 = pushout_fat(FatMap{co("o"), co("o=o"), {1}}, FatMap{co("o"), co("o=o"), {0}}, 4);
    CHECK(ze2.object == ColoredOrdinal::ze(2));
    CHECK(ze2.universal);

    auto glued = pushout_fat(FatMap{co("o"), co("o-o"), {1}}, FatMap{co("o"), co("o=o"), {0}}, 4);
    CHECK(glued.object == co("o-o=o"));
    CHECK(glued.universal);

    CHECK_THROWS_AS(pushout_fat(FatMap{co("o"), co("o-o"), {0}}, FatMap{co("o"), co("o-o"), {0}}, 4),
                    InputError);
}

TEST_CASE("link insertion along a non-surjective mono is not a pushout") {
    // [0] sits at the top of "o=o" and at dot 1 of "o-o". Both legs map
    // identically onto "o=o", which has too few dots to receive "o-o=o".
    auto po = pushout_fat(nu_un(0, co("o=o")), from_mono(SimplexMap{0, 1, {1}}), 3);
    CHECK(po.object == co("o-o=o"));
    CHECK_FALSE(po.universal);
    CHECK(po.witness == "cocone into o=o via 0>0,1>1 / 0>0,1>1 has 0 factorizations");

    // The same span against "o=o=o": (0,2) on "o=o" and (1,2) on "o-o".
    FatMap p{co("o=o"), co("o=o=o"), {0, 2}};
    FatMap q{co("o-o"), co("o=o=o"), {1, 2}};
    int factorizations = 0;
    for (const auto& u : enumerate_hom(po.object, co("o=o=o")))
        if (compose(u, po.inj_left) == p && compose(u, po.inj_right) == q) ++factorizations;
    CHECK(factorizations == 0);
}

TEST_CASE("window objects are iterated endpoint pushouts of one-edge pieces") {
    for (const auto& x : window_objects(kWindow)) {
        bool universal = false;
        CHECK(glue_from_edges(x, 4, &universal) == x);
        CHECK(universal);
    }
}

TEST_CASE("interpolants with an injective eta degenerate to identities") {
    auto f = epi_mono_lift_fat(FatMap::identity(co("o-o")));
    auto I = interpolants(f, f, 4);
    CHECK(I.rm == co("o-o"));
    CHECK(I.nm == co("o-o"));
    CHECK_FALSE(I.first_failure());
}

TEST_CASE("interpolants: the map r(m) -> m breaks at an eta collision") {
    // eta identifies the two dots of "o-o". The interpolating object gets a
    // link there, and the section of "o-o" cannot carry that link.
    auto f = epi_mono_lift_fat(FatMap{co("o-o"), co("o=o"), {0, 1}});
    auto I = interpolants(f, f, 4);
    CHECK(I.rm == co("o=o"));
    auto fail = I.first_failure();
    REQUIRE(fail);
    CHECK(fail->name == "D3");
    CHECK(I.diagrams[0].commutes);  // D1
    CHECK(I.diagrams[1].commutes);  // D2
    CHECK(I.diagrams[3].commutes);  // D4
    CHECK_FALSE(I.diagrams[6].commutes);  // D7 also routes through r(m) -> m
}

TEST_CASE("interpolants for a two-collision eta") {
    auto f = epi_mono_lift_fat(FatMap{co("o-o-o"), co("o=o=o"), {0, 1, 2}});
    auto I = interpolants(f, f, 4);
    CHECK(I.rm == co("o=o=o"));
    CHECK(I.nm == co("o=o=o"));
    CHECK(I.diagrams[0].commutes);
    CHECK(I.diagrams[1].commutes);
    CHECK_FALSE(I.diagrams[2].commutes);
    CHECK(I.diagrams[3].commutes);
}

TEST_CASE("interpolants with eps moving a class top fail D2") {
    // r = "o", eps lands on the bottom of "o=o": n(m) = "o" and the section
    // of "o=o" is its top dot.
    FatMap eta = FatMap::identity(co("o"));
    FatMap eps{co("o"), co("o=o"), {0}};
    auto I = interpolants(FatEpiMono{eta, eps}, FatEpiMono{eta, eps}, 4);
    CHECK(I.nm == co("o"));
    CHECK_FALSE(I.diagrams[1].commutes);  // D2
    CHECK(I.diagrams[3].commutes);        // D4
    CHECK_FALSE(I.diagrams[5].commutes);  // D6
}

TEST_CASE("interpolants reject factorizations with different pi images") {
    auto f = epi_mono_lift_fat(FatMap::identity(co("o-o")));
    auto g = epi_mono_lift_fat(FatMap::identity(co("o")));
    CHECK_THROWS_AS(interpolants(f, g, 4), InputError);
}

TEST_CASE("lifts of composable strings") {
    auto id = lift_pair(SimplexMap::identity(1), SimplexMap::identity(1));
    CHECK(id[0] == FatMap::identity(co("o-o")));
    CHECK(id[1] == FatMap::identity(co("o-o")));

    auto monos = lift_pair(SimplexMap::face(1, 0), SimplexMap::face(2, 2));
    CHECK(monos[0] == from_mono(SimplexMap::face(1, 0)));
    CHECK(monos[1] == from_mono(SimplexMap::face(2, 2)));

    SimplexMap epi{1, 0, {0, 0}};
    SimplexMap mono{0, 1, {1}};
    auto mixed = lift_pair(epi, mono);
    CHECK(pi_map(mixed[0]) == epi);
    CHECK(pi_map(mixed[1]) == mono);
    CHECK(mixed[0].tgt == co("o=o"));
    CHECK(mixed[1].tgt == co("o-o=o"));

    CHECK_THROWS_AS(lift_pair(epi, epi), InputError);
}

TEST_CASE("lifted strings have the right pi images on the window") {
    auto arrows = window_simplex_maps(kWindow);
    CHECK(arrows.size() == 121);
    std::size_t triples = 0;
    for (const auto& f : arrows)
        for (const auto& g : arrows) {
            if (g.src != f.tgt) continue;
            for (const auto& h : arrows) {
                if (h.src != g.tgt) continue;
                auto l = lift_triple(f, g, h);
                REQUIRE(l.size() == 3);
                CHECK(l[0].src.is_plain());
                CHECK(l[0].tgt == l[1].src);
                CHECK(l[1].tgt == l[2].src);
                CHECK(pi_map(l[0]) == f);
                CHECK(pi_map(l[1]) == g);
                CHECK(pi_map(l[2]) == h);
                for (const auto& m : l) CHECK_FALSE(validate_fat_map(m));
                ++triples;
            }
        }
    CHECK(triples > 0);
}
