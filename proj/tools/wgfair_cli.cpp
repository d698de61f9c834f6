// wgfair command line. Exit codes: 0 all checks pass, 1 a law fails,
// 2 bad input (usage, I/O, schema).

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wgfair/harness.hpp"

using namespace wgfair;

namespace {

struct Options {
    std::string strategy = "cleavage";
    int window = 4;
    std::uint64_t seed = 0;
    std::string report;
    bool window_given = false;
};

constexpr int kPass = 0, kLawFailure = 1, kInputError = 2;

TruncationWindow window_of(const Options& o) {
    TruncationWindow w;
    w.max_dots = o.window;
    validate_window(w);
    return w;
}

void write_report(const Options& o, const json& j) {
    if (o.report.empty()) return;
    store_json(o.report, j);
}

void print_report(const LawReport& r, const std::string& name) {
    std::cout << (r.ok() ? "PASS " : "FAIL ") << name << " (" << r.checked << " checked)\n";
    for (const auto& f : r.failures) std::cout << "  " << f << "\n";
}

std::string kind_of(const json& j, const std::string& requested) {
    if (!requested.empty()) return requested;
    if (j.is_object() && j.contains("kind") && j["kind"].is_string()) return j["kind"].get<std::string>();
    if (j.is_object() && j.contains("objects")) return "category";
    throw SchemaError("/kind", "cannot tell the input kind; pass --kind");
}

// Each law entry of a JSON verdict tree, printed as one line.
bool print_verdicts(const json& laws, const std::string& prefix = "") {
    bool all = true;
    for (auto& [name, v] : laws.items()) {
        if (!v.is_object() || !v.contains("pass")) continue;
        bool pass = v["pass"].get<bool>();
        all = all && pass;
        std::cout << (pass ? "PASS " : "FAIL ") << prefix << name << "\n";
        if (!pass && v.contains("witnesses"))
            for (const auto& w : v["witnesses"]) std::cout << "  " << w.get<std::string>() << "\n";
        print_verdicts(v, prefix + name + ".");
    }
    return all;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const Options& o, const std::string& path, const std::string& requested) {
    json in = load_json(path);
    std::string kind = kind_of(in, requested);
    json rep;
    rep["input"] = path;
    rep["kind"] = kind;
    bool ok = true;
    if (kind == "category") {
        auto t = category_table_from_json(in);
        auto v = validate_category(t);
        if (!v.structural.empty()) throw SchemaError("", v.structural.front());
        ok = v.laws.empty();
        rep["laws"] = v.laws;
        std::cout << (ok ? "PASS" : "FAIL") << " category laws\n";
        for (const auto& l : v.laws) std::cout << "  " << l << "\n";
    } else if (kind == "wgdouble") {
        auto g = generators_from_json(in);
        std::optional<WGDouble> x;
        std::vector<std::string> gen;
        try {
            x = from_generators(g);
        } catch (const LawViolation& e) {
            gen = e.witnesses;
        }
        if (!x) {
            try {
                x = assemble_unchecked(g);
            } catch (const LawViolation& e) {
                gen.insert(gen.end(), e.witnesses.begin(), e.witnesses.end());
            }
        }
        rep["generators"] = {{"pass", gen.empty()}, {"witnesses", gen}};
        std::cout << (gen.empty() ? "PASS" : "FAIL") << " internal category laws\n";
        for (const auto& w : gen) std::cout << "  " << w << "\n";
        ok = gen.empty();
        if (x) {
            auto r = validate_catwg2(*x);
            rep["catwg2"] = {{"homotopically_discrete", r.homotopically_discrete},
                             {"segal_isos", r.segal_isos},
                             {"induced_equivalences", r.induced_equivalences},
                             {"witnesses", r.witnesses}};
            std::cout << (r.homotopically_discrete ? "PASS" : "FAIL") << " (a) X0 homotopically discrete\n";
            std::cout << (r.segal_isos ? "PASS" : "FAIL") << " (b) Segal maps isomorphisms\n";
            std::cout << (r.induced_equivalences ? "PASS" : "FAIL") << " (c) induced Segal maps equivalences\n";
            for (const auto& w : r.witnesses) std::cout << "  " << w << "\n";
            ok = ok && r.ok();
        }
    } else if (kind == "fair" || kind == "fairwg") {
        auto p = fair_from_json(in);
        auto d = build_fair(p, make_fat_site(window_of(o)));
        auto r = kind == "fair" ? validate_fair2(d) : validate_fairwg(d);
        print_report(r.presentation, "presentation");
        print_report(r.discrete, kind == "fair" ? "object category discrete" : "object category hd");
        print_report(r.generator_maps, "generator maps");
        print_report(r.vertical_maps, "vertical maps");
        print_report(r.segal, "Segal maps");
        print_report(r.induced_segal, "induced Segal maps");
        print_report(d.functoriality, "functoriality");
        rep["presentation"] = law_json(r.presentation);
        rep["discrete"] = law_json(r.discrete);
        rep["generator_maps"] = law_json(r.generator_maps);
        rep["vertical_maps"] = law_json(r.vertical_maps);
        rep["segal"] = law_json(r.segal);
        rep["induced_segal"] = law_json(r.induced_segal);
        rep["functoriality"] = law_json(d.functoriality);
        ok = r.ok() && d.functoriality.ok();
    } else {
        throw SchemaError("/kind", "unknown kind '" + kind + "'");
    }
    rep["pass"] = ok;
    write_report(o, rep);
    return ok ? kPass : kLawFailure;
}

// ---------------------------------------------------------------- fat

int cmd_fat(const Options& o, const std::vector<std::string>& args, bool as_json) {
    if (args.empty()) throw InputError("fat: expected hom, pi, factor or pushout");
    const std::string& sub = args[0];
    auto need = [&](std::size_t n) {
        if (args.size() != n + 1) throw InputError("fat " + sub + ": expected " + std::to_string(n) + " argument(s)");
    };
    json out;
    if (sub == "hom") {
        need(2);
        auto src = ColoredOrdinal::parse(args[1]);
        auto tgt = ColoredOrdinal::parse(args[2]);
        auto maps = enumerate_hom(src, tgt);
        out["count"] = maps.size();
        out["maps"] = json::array();
        for (const auto& m : maps) out["maps"].push_back(m.dotmap_str());
        if (!as_json) {
            std::cout << maps.size() << "\n";
            for (const auto& m : maps) std::cout << m.dotmap_str() << "\n";
        }
    } else if (sub == "pi") {
        need(1);
        if (args[1].find(':') == std::string::npos) {
            auto x = ColoredOrdinal::parse(args[1]);
            out["object"] = x.str();
            out["pi"] = pi_object(x);
            if (!as_json) std::cout << "[" << pi_object(x) << "]\n";
        } else {
            auto f = FatMap::parse(args[1]);
            if (auto e = validate_fat_map(f)) throw InputError(*e);
            auto p = pi_map(f);
            out["map"] = fatmap_to_json(f);
            out["pi"] = p.str();
            if (!as_json) std::cout << p.str() << "\n";
        }
    } else if (sub == "factor") {
        need(1);
        auto f = FatMap::parse(args[1]);
        if (auto e = validate_fat_map(f)) throw InputError(*e);
        auto em = epi_mono_lift_fat(f);
        bool exact = compose(em.eps, em.eta) == f;
        out["eta"] = fatmap_to_json(em.eta);
        out["eps"] = fatmap_to_json(em.eps);
        out["composes_back"] = exact;
        if (!as_json) {
            std::cout << "eta " << em.eta.str() << "\neps " << em.eps.str() << "\n";
            std::cout << (exact ? "PASS" : "FAIL") << " eps . eta = f\n";
        }
        if (!exact) {
            if (as_json) std::cout << canonical_text(out);
            return kLawFailure;
        }
    } else if (sub == "pushout") {
        need(1);
        auto semi = args[1].find(';');
        if (semi == std::string::npos) throw InputError("fat pushout: expected LEFTMAP;RIGHTMAP");
        auto left = FatMap::parse(args[1].substr(0, semi));
        auto right = FatMap::parse(args[1].substr(semi + 1));
        for (const auto* m : {&left, &right})
            if (auto e = validate_fat_map(*m)) throw InputError(*e);
        auto p = pushout_fat(left, right, o.window);
        out["object"] = p.object.str();
        out["inj_left"] = fatmap_to_json(p.inj_left);
        out["inj_right"] = fatmap_to_json(p.inj_right);
        out["universal"] = p.universal;
        if (!p.witness.empty()) out["witness"] = p.witness;
        if (!as_json) {
            std::cout << p.object.str() << "\nleft " << p.inj_left.str() << "\nright " << p.inj_right.str() << "\n";
            std::cout << (p.universal ? "PASS" : "FAIL") << " universal up to " << o.window << " dots\n";
            if (!p.witness.empty()) std::cout << "  " << p.witness << "\n";
        }
        if (!p.universal) {
            if (as_json) std::cout << canonical_text(out);
            return kLawFailure;
        }
    } else {
        throw InputError("fat: unknown subcommand '" + sub + "'");
    }
    if (as_json) std::cout << canonical_text(out);
    return kPass;
}

// ---------------------------------------------------------------- apply

int cmd_apply(const Options& o, const std::string& op, const std::string& path, const std::string& out_path) {
    Strategy s = parse_strategy(o.strategy);
    auto w = window_of(o);
    auto delta = make_delta_site(w.max_level);
    json in = load_json(path);
    json out;
    std::string kind = kind_of(in, "");
    bool wg_input = kind == "wgdouble";
    if (!wg_input && kind != "fair") throw SchemaError("/kind", "apply expects a wgdouble or fair input");

    if (wg_input) {
        auto x = wgdouble_from_json(in);
        if (op == "pi1") {
            auto p = pi1_double(x);
            if (!p.problems.empty()) throw LawViolation(p.problems);
            out = category_to_json(*p.cat);
        } else if (op == "d2") {
            out = diagram_to_json(d2_construction(x, delta).diagram);
        } else if (op == "tr2") {
            out = diagram_to_json(tr2_strong_segalic(x, s, delta).diagram);
        } else if (op == "f2") {
            out = fair_to_json(F2(x, s, make_fat_site(w)).fair.p);
        } else {
            throw InputError("apply " + op + " does not take a wgdouble (use pi1, d2, tr2 or f2)");
        }
    } else {
        auto p = fair_from_json(in);
        if (op == "pi1") {
            auto q = pi1_fair(p);
            if (!q.problems.empty()) throw LawViolation(q.problems);
            out = category_to_json(*q.cat);
        } else if (op == "d") {
            out = fair_to_json(discretize_fair(p, s).p);
        } else if (op == "t2") {
            auto y = build_fair(p, make_fat_site(w));
            out = diagram_to_json(T2(y, delta).diagram);
        } else if (op == "r2") {
            auto y = build_fair(p, make_fat_site(w));
            auto r = R2(y, delta);
            if (!r.x) throw LawViolation(r.problems.empty() ? std::vector<std::string>{"R2 produced no double category"}
                                                            : r.problems);
            out = wgdouble_to_json(*r.x);
        } else {
            throw InputError("apply " + op + " does not take a fair presentation (use pi1, d, t2 or r2)");
        }
    }
    if (out_path.empty() || out_path == "-") std::cout << canonical_text(out);
    else store_json(out_path, out);
    return kPass;
}

// ---------------------------------------------------------------- roundtrip

int cmd_roundtrip(const Options& o, const std::string& which, const std::string& path) {
    CorpusSpec spec;
    spec.strategy = parse_strategy(o.strategy);
    spec.window = window_of(o);
    json in = load_json(path);
    CorpusInstance inst;
    inst.name = path;
    json verdicts;
    auto delta = make_delta_site(spec.window.max_level);
    auto fat = make_fat_site(spec.window);
    if (which == "x") {
        inst.x = wgdouble_from_json(in);
        verdicts = check_instance(inst, spec, {"st", "roundtrip_x"}, delta, fat);
    } else if (which == "y") {
        auto y = build_fair(fair_from_json(in), fat);
        auto r = roundtrip_y(y, spec.strategy, delta, fat);
        auto entry = [](bool pass, const std::string& w) {
            return json{{"pass", pass}, {"witnesses", w.empty() ? std::vector<std::string>{} : std::vector<std::string>{w}}};
        };
        json j;
        if (!r.error.empty()) {
            j = entry(false, r.error);
        } else {
            const auto& c = r.st_checks;
            j["t_equivalences"] = law_json(r.t_equivalences);
            j["gv_equals_h"] = law_json(c.gv_equals_h);
            j["g_equivalences"] = law_json(c.g_equivalences);
            j["L_strict"] = law_json(c.L_strict);
            j["L_segal"] = law_json(c.L_segal);
            j["h_tuple"] = law_json(c.h_tuple);
            j["g_natural"] = law_json(r.g_natural);
            j["map_well_defined"] = law_json(r.map.well_defined);
            j["map_naturality"] = law_json(r.map.naturality);
            j["leg_to_z"] = entry(r.leg_to_z.holds(), r.leg_to_z.witness);
            j["leg_to_y"] = entry(r.leg_to_y.holds(), r.leg_to_y.witness);
            j["pass"] = r.ok();
        }
        verdicts["roundtrip_y"] = j;
    } else {
        throw InputError("roundtrip: expected x or y");
    }
    bool ok = print_verdicts(verdicts);
    json rep{{"input", path}, {"strategy", o.strategy}, {"laws", verdicts}, {"pass", ok}, {"tool", kToolVersion}};
    write_report(o, rep);
    return ok ? kPass : kLawFailure;
}

// ---------------------------------------------------------------- generate

int cmd_generate(const Options& o, const std::string& family, const std::string& out_path) {
    json out;
    if (family == "micro") {
        out = wgdouble_to_json(assemble_unchecked(micro_counterexample()));
    } else {
        CorpusSpec spec;
        spec.seed = o.seed;
        spec.count = 1;
        spec.families = {parse_family(family)};
        auto c = make_corpus(spec);
        out = wgdouble_to_json(c.front().x);
        std::cerr << c.front().description << "\n";
    }
    if (out_path.empty() || out_path == "-") std::cout << canonical_text(out);
    else store_json(out_path, out);
    return kPass;
}

// ---------------------------------------------------------------- suite

struct SuiteArgs {
    std::string spec_path, families, laws = "all";
    int count = -1;
    bool plant_micro = false;
    unsigned threads = 0;
    bool seed_given = false;
    bool strategy_given = false;
};

int cmd_suite(const Options& o, const SuiteArgs& a) {
    CorpusSpec spec = a.spec_path.empty() ? CorpusSpec{} : CorpusSpec::from_json(load_json(a.spec_path));
    if (a.seed_given) spec.seed = o.seed;
    if (a.count >= 0) spec.count = a.count;
    if (!a.families.empty()) {
        spec.families.clear();
        std::stringstream ss(a.families);
        for (std::string f; std::getline(ss, f, ',');) spec.families.push_back(parse_family(f));
    }
    if (a.plant_micro) spec.plant_micro = true;
    if (a.spec_path.empty() || a.strategy_given) spec.strategy = parse_strategy(o.strategy);
    if (o.window_given || a.spec_path.empty()) spec.window = window_of(o);
    auto rep = run_suite(spec, parse_laws(a.laws), a.threads);
    for (const auto& inst : rep.data["instances"]) {
        std::cout << (inst["pass"].get<bool>() ? "PASS " : "FAIL ") << inst["name"].get<std::string>() << "  "
                  << inst["description"].get<std::string>() << "\n";
        if (!inst["pass"].get<bool>())
            for (auto& [law, v] : inst["laws"].items())
                if (!v["pass"].get<bool>()) {
                    std::cout << "  " << law;
                    if (!v["witnesses"].empty()) std::cout << ": " << v["witnesses"][0].get<std::string>();
                    std::cout << "\n";
                }
    }
    const auto& sum = rep.data["summary"];
    std::cout << sum["passed"] << "/" << sum["instances"] << " instances pass; hash " << rep.hash << "\n";
    write_report(o, rep.to_json());
    return rep.all_pass ? kPass : kLawFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Workbench for weakly globular double categories and fair 2-categories"};
    app.require_subcommand(1);
    Options o;
    set_object_budget(CorpusSpec{}.object_budget);
    if (const char* env = std::getenv("WGFAIR_WINDOW")) {
        try {
            o.window = std::stoi(env);
        } catch (const std::exception&) {
            std::cerr << "error: WGFAIR_WINDOW must be an integer\n";
            return kInputError;
        }
    }
    auto add_common = [&](CLI::App* c) {
        c->add_option("--strategy", o.strategy, "cleavage or retraction")->check(CLI::IsMember({"cleavage", "retraction"}));
        c->add_option_function<int>("--window", [&](const int& v) { o.window = v; o.window_given = true; },
                                    "maximal number of dots in the fat-delta window");
        c->add_option("--seed", o.seed, "corpus seed");
        c->add_option("--report", o.report, "write a JSON report here");
    };

    std::string in_path, out_path, kind, op, which, family = "surjection";
    std::vector<std::string> fat_args;
    bool fat_json = false;
    SuiteArgs sa;

    auto* validate = app.add_subcommand("validate", "check an input file against its axioms");
    validate->add_option("input", in_path)->required();
    validate->add_option("--kind", kind, "category, wgdouble, fair or fairwg");
    add_common(validate);

    auto* fat = app.add_subcommand("fat", "fat-delta calculus: hom SRC TGT | pi OBJ|MAP | factor MAP | pushout SPEC");
    fat->add_option("args", fat_args)->required();
    fat->add_flag("--json", fat_json, "print JSON");
    add_common(fat);

    auto* apply = app.add_subcommand("apply", "apply a construction: pi1 d2 tr2 f2 (double) or pi1 d t2 r2 (fair)");
    apply->add_option("op", op)->required()->check(CLI::IsMember({"pi1", "d2", "tr2", "f2", "t2", "r2", "d"}));
    apply->add_option("input", in_path)->required();
    apply->add_option("-o,--output", out_path, "output file (stdout when absent)");
    add_common(apply);

    auto* roundtrip = app.add_subcommand("roundtrip", "round trip x (double) or y (fair)");
    roundtrip->add_option("which", which)->required()->check(CLI::IsMember({"x", "y"}));
    roundtrip->add_option("input", in_path)->required();
    add_common(roundtrip);

    auto* generate = app.add_subcommand("generate", "write a corpus instance");
    generate->add_option("--family", family, "surjection, category, random-hd, terminal or micro");
    generate->add_option("-o,--output", out_path, "output file (stdout when absent)");
    add_common(generate);

    auto* suite = app.add_subcommand("suite", "corpus suite");
    suite->require_subcommand(1);
    auto* run = suite->add_subcommand("run", "run the law suite on a generated corpus");
    run->add_option("--spec", sa.spec_path, "corpus spec JSON");
    run->add_option("--count", sa.count, "number of instances");
    run->add_option("--families", sa.families, "comma-separated families");
    run->add_option("--laws", sa.laws, "comma-separated law groups, or all");
    run->add_flag("--plant-micro", sa.plant_micro, "append the micro counterexample");
    run->add_option("--threads", sa.threads, "worker threads (0 = hardware concurrency)");
    add_common(run);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kInputError;
    }
    sa.seed_given = run->count("--seed") > 0;
    sa.strategy_given = run->count("--strategy") > 0;

    try {
        if (*validate) return cmd_validate(o, in_path, kind);
        if (*fat) return cmd_fat(o, fat_args, fat_json);
        if (*apply) return cmd_apply(o, op, in_path, out_path);
        if (*roundtrip) return cmd_roundtrip(o, which, in_path);
        if (*generate) return cmd_generate(o, family, out_path);
        if (*run) return cmd_suite(o, sa);
    } catch (const LawViolation& e) {
        std::cerr << "law violation: " << e.what() << "\n";
        for (std::size_t i = 1; i < e.witnesses.size(); ++i) std::cerr << "  " << e.witnesses[i] << "\n";
        return kLawFailure;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kLawFailure;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
