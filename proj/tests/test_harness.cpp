#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wgfair/harness.hpp"

using namespace wgfair;

namespace {

CatPtr free_arrow() { return poset_category(2, {{0, 1}}); }

template <class F>
std::string pointer_of(F&& f) {
    try {
        f();
    } catch (const SchemaError& e) {
        return e.pointer;
    }
    return "<no schema error>";
}

}  // namespace

TEST_CASE("category JSON round-trips byte for byte") {
    for (const auto& c : {free_arrow(), cyclic_group_category(3), FinCat::chaotic(3), FinCat::empty()}) {
        auto text = canonical_text(category_to_json(*c));
        auto back = category_from_json(json::parse(text));
        CHECK(back->num_objects() == c->num_objects());
        CHECK(back->num_morphisms() == c->num_morphisms());
        CHECK(canonical_text(category_to_json(*back)) == text);
    }
}

TEST_CASE("double category JSON round-trips, including a non-thin arrow level") {
    auto s = generate_from_surjection(free_arrow(), {0, 0, 1});
    for (const auto& x : {s.x, cyclic_double(), terminal_double(), category_instance(cyclic_group_category(2))}) {
        auto text = canonical_text(wgdouble_to_json(x));
        auto y = wgdouble_from_json(json::parse(text));
        CHECK(canonical_text(wgdouble_to_json(y)) == text);
        CHECK(validate_catwg2(y).ok());
    }
}

TEST_CASE("loaded hd categories keep the class-label storage") {
    auto s = generate_from_surjection(free_arrow(), {0, 0, 1});
    auto y = wgdouble_from_json(wgdouble_to_json(s.x));
    CHECK(y.X0->mode() == FinCat::Mode::Equivalence);
    CHECK(y.X0->iso_labels() == s.x.X0->iso_labels());
}

TEST_CASE("fair presentation JSON round-trips") {
    auto fat = make_fat_site({4, 3});
    auto s = generate_from_surjection(free_arrow(), {0, 0, 1});
    for (const auto& p : {fair_category_instance(free_arrow()), F2(s.x, Strategy::Cleavage, fat).fair.p,
                          pi_star(s.x)}) {
        auto text = canonical_text(fair_to_json(p));
        auto q = fair_from_json(json::parse(text));
        CHECK(canonical_text(fair_to_json(q)) == text);
        CHECK(validate_presentation(q).ok());
    }
}

TEST_CASE("malformed compose table is a schema error at its pointer") {
    auto j = wgdouble_to_json(category_instance(free_arrow()));
    j["X1"]["compose"].erase(0);
    CHECK(pointer_of([&] { wgdouble_from_json(j); }) == "/X1/compose");

    auto c = category_to_json(*free_arrow());
    c["compose"][0] = json::array({0, 1});
    CHECK(pointer_of([&] { category_from_json(c); }) == "/compose/0");
    c = category_to_json(*free_arrow());
    c["compose"].push_back(c["compose"][0]);
    CHECK(pointer_of([&] { category_from_json(c); }) == "/compose");
}

TEST_CASE("schema errors name the offending value") {
    auto j = wgdouble_to_json(category_instance(free_arrow()));
    auto bad = j;
    bad["d0"]["ob"][1] = "one";
    CHECK(pointer_of([&] { wgdouble_from_json(bad); }) == "/d0/ob/1");
    bad = j;
    bad.erase("s0");
    CHECK(pointer_of([&] { wgdouble_from_json(bad); }) == "/s0");
    bad = j;
    bad["X0"]["objects"] = json::array({0, 0});
    CHECK(pointer_of([&] { wgdouble_from_json(bad); }) == "/X0/objects");
    bad = j;
    bad["d1"]["ob"][0] = 7;
    CHECK(pointer_of([&] { wgdouble_from_json(bad); }) == "/d1/ob/0");
    bad = j;
    bad["comp"].erase(0);
    CHECK(pointer_of([&] { wgdouble_from_json(bad); }) == "/comp");
    CHECK(pointer_of([&] { CorpusSpec::from_json(json{{"families", {"surjection", "cubes"}}}); }) == "/families/1");
    CHECK(pointer_of([&] { CorpusSpec::from_json(json{{"strategy", "greedy"}}); }) == "/strategy");
}

TEST_CASE("category law failures are law violations, not schema errors") {
    // One object, a = morphism 1 with a a = id, and a unit law broken by id a = id.
    json c = {{"objects", {0}},
              {"morphisms", {{0, 0, 0}, {1, 0, 0}}},
              {"identities", {{0, 0}}},
              {"compose", {{0, 0, 0}, {0, 1, 0}, {1, 0, 1}, {1, 1, 0}}}};
    CHECK_THROWS_AS(category_from_json(c), LawViolation);
    c["compose"][1] = {0, 1, 1};
    CHECK(category_from_json(c)->num_morphisms() == 2);
}

TEST_CASE("micro counterexample survives serialization as planted input") {
    auto x = assemble_unchecked(micro_counterexample());
    auto j = wgdouble_to_json(x);
    CHECK_THROWS_AS(wgdouble_from_json(j), LawViolation);
    auto y = assemble_unchecked(generators_from_json(j));
    auto r = validate_catwg2(y);
    CHECK(r.homotopically_discrete);
    CHECK(r.segal_isos);
    CHECK_FALSE(r.induced_equivalences);
}

TEST_CASE("fat-map strings parse and print back") {
    CHECK(FatMap::parse_dotmap("0>0,1>2") == std::vector<int>{0, 2});
    auto f = FatMap::parse("o-o:o=o-o:0>0,1>2");
    CHECK(f.dotmap_str() == "0>0,1>2");
    CHECK(f.str() == "o-o:o=o-o:0>0,1>2");
    auto j = fatmap_to_json(f);
    CHECK(j["text"] == "o-o:o=o-o:0>0,1>2");
    CHECK(FatMap::parse(j["text"].get<std::string>()) == f);
}

TEST_CASE("splitmix64 and FNV-1a match their reference values") {
    std::uint64_t st = 0;
    CHECK(splitmix64(st) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(st) == 0x6e789e6aa1b965f4ULL);
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("corpus generation is deterministic and rotates families") {
    CorpusSpec spec;
    spec.count = 12;
    spec.seed = 7;
    auto a = make_corpus(spec);
    auto b = make_corpus(spec);
    REQUIRE(a.size() == 12);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].family == family_name(spec.families[i % spec.families.size()]));
        CHECK(canonical_text(wgdouble_to_json(a[i].x)) == canonical_text(wgdouble_to_json(b[i].x)));
        CHECK(a[i].x.X1->num_objects() <= spec.bounds.max_objects);
        CHECK(a[i].x.X1->num_morphisms() <= spec.bounds.max_morphisms);
        CHECK(a[i].collapse.has_value() == (a[i].family == "surjection"));
    }
    spec.seed = 8;
    auto c = make_corpus(spec);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].seed != c[i].seed;
    CHECK(differs);

    spec.plant_micro = true;
    auto d = make_corpus(spec);
    CHECK(d.size() == 13);
    CHECK(d.back().planted);
}

TEST_CASE("corpus members are weakly globular double categories") {
    CorpusSpec spec;
    spec.count = 24;
    for (const auto& inst : make_corpus(spec)) {
        CAPTURE(inst.name);
        CHECK(validate_catwg2(inst.x).ok());
        if (inst.collapse) CHECK(validate_wg_morphism(inst.x, *inst.base, *inst.collapse).empty());
    }
}

TEST_CASE("random hd categories are homotopically discrete and their constant doubles are valid") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto h = random_hd_category(seed, 12);
        CHECK(is_homotopically_discrete(*h).hd);
        auto x = constant_double(h);
        CHECK(validate_catwg2(x).ok());
        CHECK(pi1_double(x).cat->num_objects() == h->num_iso_classes());
    }
}

TEST_CASE("CorpusSpec JSON round-trips") {
    CorpusSpec s;
    s.seed = 99;
    s.count = 3;
    s.families = {Family::Terminal, Family::RandomHd};
    s.strategy = Strategy::Retraction;
    s.plant_micro = true;
    auto t = CorpusSpec::from_json(s.to_json());
    CHECK(t.to_json() == s.to_json());
}

TEST_CASE("terminal-only corpus passes every law and reports deterministically") {
    CorpusSpec spec;
    spec.count = 3;
    spec.families = {Family::Terminal};
    auto r1 = run_suite(spec, parse_laws("all"), 1);
    auto r2 = run_suite(spec, parse_laws("all"), 2);
    CHECK(r1.all_pass);
    CHECK(r1.hash == r2.hash);
    CHECK(canonical_text(r1.data) == canonical_text(r2.data));
    CHECK(r1.data["summary"]["passed"] == 3);
    for (const auto& law : all_laws()) CHECK(r1.data["instances"][0]["laws"].contains(law));
    CHECK_FALSE(r1.data.contains("timing_ms"));
    CHECK(r1.to_json().contains("timing_ms"));
}

TEST_CASE("planted micro counterexample is reported as a catwg2 failure") {
    CorpusSpec spec;
    spec.count = 2;
    spec.families = {Family::Terminal};
    spec.plant_micro = true;
    auto r = run_suite(spec, parse_laws("catwg2"), 1);
    CHECK_FALSE(r.all_pass);
    const auto& last = r.data["instances"].back();
    CHECK(last["name"] == "planted-micro");
    CHECK(last["laws"]["catwg2"]["pass"] == false);
    CHECK(last["laws"]["catwg2"]["induced_equivalences"] == false);
    CHECK(r.data["summary"]["failures_by_law"]["catwg2"] == 1);
}

TEST_CASE("kernel laws hold on surjection and hd instances") {
    CorpusSpec spec;
    spec.count = 8;
    spec.families = {Family::Surjection, Family::RandomHd};
    auto delta = make_delta_site(3);
    auto fat = make_fat_site({4, 3});
    for (const auto& inst : make_corpus(spec)) {
        CAPTURE(inst.name);
        auto j = check_instance(inst, spec, {"kernel"}, delta, fat);
        CHECK(j["kernel"]["pass"] == true);
    }
}

TEST_CASE("unknown law groups and families are input errors") {
    CHECK_THROWS_AS(parse_laws("catwg2,bogus"), InputError);
    CHECK_THROWS_AS(parse_family("cubes"), InputError);
    CHECK(parse_laws("tr2,f2").size() == 2);
    CHECK(parse_laws("all").size() == all_laws().size());
}
