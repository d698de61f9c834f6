#include "wgfair/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

namespace wgfair {

const char* const kToolVersion = "wgfair 0.1.0";

namespace {

// ---------------------------------------------------------------- schema helpers

const json& field(const json& j, const char* key, const std::string& ptr) {
    if (!j.is_object()) throw SchemaError(ptr.empty() ? "/" : ptr, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(ptr + "/" + key, "missing field");
    return *it;
}

const json& array_at(const json& j, const std::string& ptr) {
    if (!j.is_array()) throw SchemaError(ptr, "expected an array");
    return j;
}

long long integer(const json& j, const std::string& ptr) {
    if (!j.is_number_integer()) throw SchemaError(ptr, "expected an integer");
    return j.get<long long>();
}

std::vector<long long> int_row(const json& j, std::size_t n, const std::string& ptr) {
    array_at(j, ptr);
    if (j.size() != n) throw SchemaError(ptr, "expected " + std::to_string(n) + " entries");
    std::vector<long long> r;
    for (std::size_t i = 0; i < n; ++i) r.push_back(integer(j[i], ptr + "/" + std::to_string(i)));
    return r;
}

std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

// Pointer of the table part a structural message is about.
std::string table_part(const std::string& msg) {
    if (msg.rfind("object ids", 0) == 0) return "/objects";
    if (msg.find("identity") != std::string::npos) return "/identities";
    if (msg.rfind("morphism ids", 0) == 0 || msg.rfind("dangling endpoint", 0) == 0) return "/morphisms";
    return "/compose";
}

json law_entry(bool pass, std::vector<std::string> witnesses, std::size_t checked = 0) {
    json j;
    j["pass"] = pass;
    if (checked) j["checked"] = checked;
    j["witnesses"] = std::move(witnesses);
    return j;
}

json flag_entry(bool pass, const std::string& witness) {
    return law_entry(pass, pass || witness.empty() ? std::vector<std::string>{} : std::vector<std::string>{witness});
}

json combine(std::initializer_list<const LawReport*> rs) {
    LawReport all;
    for (const auto* r : rs) {
        all.checked += r->checked;
        for (const auto& f : r->failures) all.fail(f);
    }
    return law_json(all);
}

bool entry_pass(const json& e) { return e.at("pass").get<bool>(); }

// Functor given by a table of (a, b) -> c on a pair category.
FunctorMap pair_functor_from_json(const json& jo, const json* jm, const FiberProduct& pairs, CatPtr target,
                                  const std::string& ptr, const std::string& mptr) {
    std::map<std::pair<long long, long long>, long long> ob, mor;
    array_at(jo, ptr);
    for (std::size_t i = 0; i < jo.size(); ++i) {
        auto r = int_row(jo[i], 3, at(ptr, i));
        if (!ob.emplace(std::make_pair(r[0], r[1]), r[2]).second) throw SchemaError(at(ptr, i), "duplicate pair");
    }
    if (jm) {
        array_at(*jm, mptr);
        for (std::size_t i = 0; i < jm->size(); ++i) {
            auto r = int_row((*jm)[i], 3, at(mptr, i));
            if (!mor.emplace(std::make_pair(r[0], r[1]), r[2]).second)
                throw SchemaError(at(mptr, i), "duplicate pair");
        }
    } else if (!target->is_thin()) {
        throw SchemaError(mptr, "missing field (the target category is not thin)");
    }
    auto fo = [&](Obj p) -> Obj {
        auto t = pairs.tuple(p);
        auto it = ob.find({t[0], t[1]});
        if (it == ob.end())
            throw SchemaError(ptr, "no entry for the pair (" + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ")");
        if (it->second < 0 || it->second >= target->num_objects()) throw SchemaError(ptr, "dangling object id");
        return static_cast<Obj>(it->second);
    };
    auto fm = [&](Mor m) -> Mor {
        Mor a = pairs.component(m, 0), b = pairs.component(m, 1);
        auto it = mor.find({a, b});
        if (it == mor.end())
            throw SchemaError(mptr, "no entry for the pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        if (it->second < 0 || it->second >= target->num_morphisms()) throw SchemaError(mptr, "dangling morphism id");
        return it->second;
    };
    return FunctorMap::from_functions(pairs.cat, target, fo, fm);
}

// Thin homotopically discrete categories are kept as class labels, the form
// the constructions produce; explicit tables would make every fiber product
// over them materialize its morphisms.
CatPtr compact(const CatPtr& c) {
    if (c->mode() == FinCat::Mode::Equivalence || !c->is_thin() || !is_homotopically_discrete(*c).hd) return c;
    std::vector<std::int64_t> labels(c->iso_labels().begin(), c->iso_labels().end());
    return FinCat::make_equivalence(labels);
}

// The same functor between recompacted categories; object ids are unchanged
// and morphisms of a thin source are matched by their endpoints.
FunctorMap recompact(const FunctorMap& f, const CatPtr& src, const CatPtr& tgt) {
    if (src == f.source && tgt == f.target) return f;
    return FunctorMap::from_functions(
        src, tgt, [&](Obj x) { return f.ob[x]; },
        [&](Mor m) { return f.map_mor(src == f.source ? m : f.source->thin_hom(src->src(m), src->tgt(m))); });
}

json pair_table(const FiberProduct& pairs, const FunctorMap& f) {
    json rows = json::array();
    for (Obj p = 0; p < pairs.cat->num_objects(); ++p) {
        auto t = pairs.tuple(p);
        rows.push_back({t[0], t[1], f.ob[p]});
    }
    return rows;
}

json pair_table_mor(const FiberProduct& pairs, const FunctorMap& f) {
    json rows = json::array();
    for (Mor m = 0; m < pairs.cat->num_morphisms(); ++m)
        rows.push_back({pairs.component(m, 0), pairs.component(m, 1), f.map_mor(m)});
    return rows;
}

}  // namespace

// ---------------------------------------------------------------- categories and functors

json category_to_json(const FinCat& c) {
    auto t = to_table(c);
    json j;
    j["objects"] = t.objects;
    json mors = json::array();
    for (const auto& r : t.morphisms) mors.push_back({r.id, r.src, r.tgt});
    j["morphisms"] = mors;
    json ids = json::array();
    for (const auto& [o, m] : t.identities) ids.push_back({o, m});
    j["identities"] = ids;
    json comp = json::array();
    auto rows = t.compose;
    std::sort(rows.begin(), rows.end());
    for (const auto& e : rows) comp.push_back({e[0], e[1], e[2]});
    j["compose"] = comp;
    return j;
}

CategoryTable category_table_from_json(const json& j, const std::string& ptr) {
    CategoryTable t;
    const auto& objs = array_at(field(j, "objects", ptr), ptr + "/objects");
    for (std::size_t i = 0; i < objs.size(); ++i) t.objects.push_back(integer(objs[i], at(ptr + "/objects", i)));
    const auto& mors = array_at(field(j, "morphisms", ptr), ptr + "/morphisms");
    for (std::size_t i = 0; i < mors.size(); ++i) {
        auto r = int_row(mors[i], 3, at(ptr + "/morphisms", i));
        t.morphisms.push_back({r[0], r[1], r[2]});
    }
    const auto& ids = array_at(field(j, "identities", ptr), ptr + "/identities");
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto r = int_row(ids[i], 2, at(ptr + "/identities", i));
        t.identities.push_back({r[0], r[1]});
    }
    const auto& comp = array_at(field(j, "compose", ptr), ptr + "/compose");
    for (std::size_t i = 0; i < comp.size(); ++i) {
        auto r = int_row(comp[i], 3, at(ptr + "/compose", i));
        t.compose.push_back({r[0], r[1], r[2]});
    }
    return t;
}

CatPtr category_from_json(const json& j, const std::string& ptr) {
    auto t = category_table_from_json(j, ptr);
    auto rep = validate_category(t);
    if (!rep.structural.empty()) throw SchemaError(ptr + table_part(rep.structural.front()), rep.structural.front());
    if (!rep.laws.empty()) throw LawViolation(rep.laws);
    return build_category(t);
}

json functor_to_json(const FunctorMap& f) {
    json j;
    j["ob"] = f.ob;
    if (!f.target->is_thin()) {
        std::vector<Mor> mor(f.source->num_morphisms());
        for (Mor m = 0; m < f.source->num_morphisms(); ++m) mor[m] = f.map_mor(m);
        j["mor"] = mor;
    }
    return j;
}

FunctorMap functor_from_json(const json& j, CatPtr source, CatPtr target, const std::string& ptr) {
    FunctorMap f;
    f.source = source;
    f.target = target;
    const auto& ob = array_at(field(j, "ob", ptr), ptr + "/ob");
    if (ob.size() != static_cast<std::size_t>(source->num_objects()))
        throw SchemaError(ptr + "/ob", "expected one entry per source object");
    for (std::size_t i = 0; i < ob.size(); ++i) {
        auto v = integer(ob[i], at(ptr + "/ob", i));
        if (v < 0 || v >= target->num_objects()) throw SchemaError(at(ptr + "/ob", i), "dangling object id");
        f.ob.push_back(static_cast<Obj>(v));
    }
    if (!target->is_thin()) {
        const auto& mor = array_at(field(j, "mor", ptr), ptr + "/mor");
        if (mor.size() != static_cast<std::size_t>(source->num_morphisms()))
            throw SchemaError(ptr + "/mor", "expected one entry per source morphism");
        for (std::size_t i = 0; i < mor.size(); ++i) {
            auto v = integer(mor[i], at(ptr + "/mor", i));
            if (v < 0 || v >= target->num_morphisms()) throw SchemaError(at(ptr + "/mor", i), "dangling morphism id");
            f.mor.push_back(v);
        }
    }
    auto errs = validate_functor(f);
    if (!errs.empty()) throw LawViolation(errs);
    return f;
}

// ---------------------------------------------------------------- double categories

json wgdouble_to_json(const WGDouble& x) {
    json j;
    j["kind"] = "wgdouble";
    j["X0"] = category_to_json(*x.X0);
    j["X1"] = category_to_json(*x.X1);
    j["d0"] = functor_to_json(x.d0);
    j["d1"] = functor_to_json(x.d1);
    j["s0"] = functor_to_json(x.s0);
    j["comp"] = pair_table(x.X2, x.comp);
    if (!x.X1->is_thin()) j["comp_mor"] = pair_table_mor(x.X2, x.comp);
    return j;
}

WGGenerators generators_from_json(const json& j, const std::string& ptr) {
    WGGenerators g;
    g.X0 = category_from_json(field(j, "X0", ptr), ptr + "/X0");
    g.X1 = category_from_json(field(j, "X1", ptr), ptr + "/X1");
    g.d0 = functor_from_json(field(j, "d0", ptr), g.X1, g.X0, ptr + "/d0");
    g.d1 = functor_from_json(field(j, "d1", ptr), g.X1, g.X0, ptr + "/d1");
    g.s0 = functor_from_json(field(j, "s0", ptr), g.X0, g.X1, ptr + "/s0");
    const auto& comp = array_at(field(j, "comp", ptr), ptr + "/comp");
    for (std::size_t i = 0; i < comp.size(); ++i) {
        auto r = int_row(comp[i], 3, at(ptr + "/comp", i));
        for (int k = 0; k < 3; ++k)
            if (r[k] < 0 || r[k] >= g.X1->num_objects()) throw SchemaError(at(ptr + "/comp", i), "dangling object id");
        if (!g.comp_ob.emplace(std::make_pair(Obj(r[0]), Obj(r[1])), Obj(r[2])).second)
            throw SchemaError(at(ptr + "/comp", i), "duplicate pair");
    }
    if (!g.X1->is_thin()) {
        const auto& cm = array_at(field(j, "comp_mor", ptr), ptr + "/comp_mor");
        for (std::size_t i = 0; i < cm.size(); ++i) {
            auto r = int_row(cm[i], 3, at(ptr + "/comp_mor", i));
            for (int k = 0; k < 3; ++k)
                if (r[k] < 0 || r[k] >= g.X1->num_morphisms())
                    throw SchemaError(at(ptr + "/comp_mor", i), "dangling morphism id");
            if (!g.comp_mor.emplace(std::make_pair(Mor(r[0]), Mor(r[1])), Mor(r[2])).second)
                throw SchemaError(at(ptr + "/comp_mor", i), "duplicate pair");
        }
    }
    // The composition tables cover exactly the composable pairs.
    for (const auto& [fg, h] : g.comp_ob)
        if (g.d0(fg.first) != g.d1(fg.second))
            throw SchemaError(ptr + "/comp", "entry for the non-composable pair (" + std::to_string(fg.first) + ", " +
                                                 std::to_string(fg.second) + ")");
    for (Obj f = 0; f < g.X1->num_objects(); ++f)
        for (Obj k = 0; k < g.X1->num_objects(); ++k)
            if (g.d0(f) == g.d1(k) && !g.comp_ob.count({f, k}))
                throw SchemaError(ptr + "/comp",
                                  "no composite for the pair (" + std::to_string(f) + ", " + std::to_string(k) + ")");
    if (!g.X1->is_thin())
        for (Mor m = 0; m < g.X1->num_morphisms(); ++m)
            for (Mor n = 0; n < g.X1->num_morphisms(); ++n)
                if (g.d0.map_mor(m) == g.d1.map_mor(n) && !g.comp_mor.count({m, n}))
                    throw SchemaError(ptr + "/comp_mor", "no composite for the morphism pair (" + std::to_string(m) +
                                                             ", " + std::to_string(n) + ")");
    auto X0 = compact(g.X0), X1 = compact(g.X1);
    g.d0 = recompact(g.d0, X1, X0);
    g.d1 = recompact(g.d1, X1, X0);
    g.s0 = recompact(g.s0, X0, X1);
    g.X0 = X0;
    g.X1 = X1;
    return g;
}

WGDouble wgdouble_from_json(const json& j, const std::string& ptr) {
    return from_generators(generators_from_json(j, ptr));
}

// ---------------------------------------------------------------- fair presentations

json fair_to_json(const FairPresentation& p) {
    json j;
    j["kind"] = "fair";
    j["O"] = category_to_json(*p.O);
    j["A"] = category_to_json(*p.A);
    j["U"] = category_to_json(*p.U);
    j["src"] = functor_to_json(p.srcA);
    j["tgt"] = functor_to_json(p.tgtA);
    j["srcU"] = functor_to_json(p.srcU);
    j["u"] = functor_to_json(p.u);
    j["compA"] = pair_table(p.pairsA, p.compA);
    j["compU"] = pair_table(p.pairsU, p.compU);
    if (!p.A->is_thin()) j["compA_mor"] = pair_table_mor(p.pairsA, p.compA);
    if (!p.U->is_thin()) j["compU_mor"] = pair_table_mor(p.pairsU, p.compU);
    return j;
}

FairPresentation fair_from_json(const json& j, const std::string& ptr) {
    FairPresentation p;
    p.O = category_from_json(field(j, "O", ptr), ptr + "/O");
    p.A = category_from_json(field(j, "A", ptr), ptr + "/A");
    p.U = category_from_json(field(j, "U", ptr), ptr + "/U");
    p.srcA = functor_from_json(field(j, "src", ptr), p.A, p.O, ptr + "/src");
    p.tgtA = functor_from_json(field(j, "tgt", ptr), p.A, p.O, ptr + "/tgt");
    p.srcU = functor_from_json(field(j, "srcU", ptr), p.U, p.O, ptr + "/srcU");
    p.u = functor_from_json(field(j, "u", ptr), p.U, p.A, ptr + "/u");
    auto O = compact(p.O), A = compact(p.A), U = compact(p.U);
    p.srcA = recompact(p.srcA, A, O);
    p.tgtA = recompact(p.tgtA, A, O);
    p.srcU = recompact(p.srcU, U, O);
    p.u = recompact(p.u, U, A);
    p.O = O;
    p.A = A;
    p.U = U;
    build_pairs(p);
    auto opt = [&](const char* key) -> const json* {
        auto it = j.find(key);
        return it == j.end() ? nullptr : &*it;
    };
    p.compA = pair_functor_from_json(field(j, "compA", ptr), opt("compA_mor"), p.pairsA, p.A, ptr + "/compA",
                                     ptr + "/compA_mor");
    p.compU = pair_functor_from_json(field(j, "compU", ptr), opt("compU_mor"), p.pairsU, p.U, ptr + "/compU",
                                     ptr + "/compU_mor");
    return p;
}

// ---------------------------------------------------------------- files

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("not valid JSON: ") + e.what());
    }
}

std::string canonical_text(const json& j) { return j.dump(2) + "\n"; }

void store_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << canonical_text(j);
}

json law_json(const LawReport& r) { return law_entry(r.ok(), r.failures, r.checked); }

json diagram_to_json(const PseudoDiagram& d) {
    const Site& s = *d.site;
    json j;
    j["kind"] = "diagram";
    j["site"] = s.kind == Site::Kind::Delta ? "delta" : "fat";
    j["objects"] = s.object_names;
    json levels = json::array();
    for (const auto& c : d.level) levels.push_back(category_to_json(*c));
    j["levels"] = levels;
    json arrows = json::array();
    for (int a = 0; a < s.num_arrows(); ++a)
        arrows.push_back({{"name", s.arrow_name(a)},
                          {"src", s.arrows[a].src},
                          {"tgt", s.arrows[a].tgt},
                          {"act", functor_to_json(d.act[a])}});
    j["arrows"] = arrows;
    json cells = json::array();
    for (const auto& [fg, comps] : d.stored_cells) cells.push_back({{"f", fg.first}, {"g", fg.second}, {"components", comps}});
    j["cells"] = cells;
    return j;
}

json fatmap_to_json(const FatMap& f) {
    return {{"src", f.src.str()}, {"tgt", f.tgt.str()}, {"dotmap", f.dotmap_str()}, {"text", f.str()}};
}

// ---------------------------------------------------------------- corpus

std::string family_name(Family f) {
    switch (f) {
        case Family::Surjection: return "surjection";
        case Family::Category: return "category";
        case Family::RandomHd: return "random-hd";
        case Family::Terminal: return "terminal";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    for (auto f : {Family::Surjection, Family::Category, Family::RandomHd, Family::Terminal})
        if (family_name(f) == s) return f;
    throw InputError("unknown family '" + s + "' (expected surjection, category, random-hd or terminal)");
}

json CorpusSpec::to_json() const {
    json j;
    j["seed"] = seed;
    j["count"] = count;
    j["bounds"] = {{"max_objects", bounds.max_objects}, {"max_morphisms", bounds.max_morphisms}};
    std::vector<std::string> fams;
    for (auto f : families) fams.push_back(family_name(f));
    j["families"] = fams;
    j["strategy"] = strategy_name(strategy);
    j["window"] = {{"max_dots", window.max_dots}, {"max_level", window.max_level}};
    j["plant_micro"] = plant_micro;
    j["object_budget"] = object_budget;
    return j;
}

CorpusSpec CorpusSpec::from_json(const json& j) {
    CorpusSpec s;
    if (!j.is_object()) throw SchemaError("/", "expected an object");
    auto get_int = [&](const json& o, const char* key, const std::string& ptr, auto& out) {
        if (auto it = o.find(key); it != o.end()) out = static_cast<std::decay_t<decltype(out)>>(integer(*it, ptr + "/" + key));
    };
    get_int(j, "seed", "", s.seed);
    get_int(j, "count", "", s.count);
    if (s.count < 0) throw SchemaError("/count", "must be non-negative");
    if (auto it = j.find("bounds"); it != j.end()) {
        if (!it->is_object()) throw SchemaError("/bounds", "expected an object");
        get_int(*it, "max_objects", "/bounds", s.bounds.max_objects);
        get_int(*it, "max_morphisms", "/bounds", s.bounds.max_morphisms);
    }
    if (auto it = j.find("families"); it != j.end()) {
        array_at(*it, "/families");
        s.families.clear();
        for (std::size_t i = 0; i < it->size(); ++i) {
            if (!(*it)[i].is_string()) throw SchemaError(at("/families", i), "expected a string");
            try {
                s.families.push_back(parse_family((*it)[i].get<std::string>()));
            } catch (const InputError& e) {
                throw SchemaError(at("/families", i), e.what());
            }
        }
        if (s.families.empty()) throw SchemaError("/families", "empty family list");
    }
    if (auto it = j.find("strategy"); it != j.end()) {
        if (!it->is_string()) throw SchemaError("/strategy", "expected a string");
        try {
            s.strategy = parse_strategy(it->get<std::string>());
        } catch (const InputError& e) {
            throw SchemaError("/strategy", e.what());
        }
    }
    if (auto it = j.find("window"); it != j.end()) {
        if (!it->is_object()) throw SchemaError("/window", "expected an object");
        get_int(*it, "max_dots", "/window", s.window.max_dots);
        get_int(*it, "max_level", "/window", s.window.max_level);
    }
    if (auto it = j.find("plant_micro"); it != j.end()) {
        if (!it->is_boolean()) throw SchemaError("/plant_micro", "expected a boolean");
        s.plant_micro = it->get<bool>();
    }
    get_int(j, "object_budget", "", s.object_budget);
    if (s.object_budget == 0) throw SchemaError("/object_budget", "must be positive");
    return s;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

WGDouble constant_double(const CatPtr& hd) {
    WGGenerators g;
    g.X0 = hd;
    g.X1 = hd;
    g.d0 = g.d1 = g.s0 = FunctorMap::identity(hd);
    for (Obj x = 0; x < hd->num_objects(); ++x) g.comp_ob[{x, x}] = x;
    if (!hd->is_thin())
        for (Mor m = 0; m < hd->num_morphisms(); ++m) g.comp_mor[{m, m}] = m;
    return from_generators(g);
}

CatPtr random_hd_category(std::uint64_t seed, int max_objects) {
    std::uint64_t st = seed;
    std::mt19937_64 rng(splitmix64(st));
    int hi = std::max(1, std::min(max_objects, 6));
    int n = std::uniform_int_distribution<int>(1, hi)(rng);
    std::vector<std::int64_t> labels(n);
    for (auto& l : labels) l = std::uniform_int_distribution<int>(0, n - 1)(rng);
    return FinCat::make_equivalence(labels);
}

std::vector<CorpusInstance> make_corpus(const CorpusSpec& spec) {
    if (spec.families.empty()) throw InputError("corpus needs at least one family");
    std::vector<CorpusInstance> out;
    std::uint64_t state = spec.seed;
    for (int i = 0; i < spec.count; ++i) {
        Family fam = spec.families[i % spec.families.size()];
        std::uint64_t sub = splitmix64(state);
        CorpusInstance c;
        c.family = family_name(fam);
        c.seed = sub;
        char name[32];
        std::snprintf(name, sizeof name, "%03d", i);
        c.name = std::string(name) + "-" + c.family;
        switch (fam) {
            case Family::Surjection: {
                auto ri = generate_random_wg(sub, spec.bounds);
                c.description = "surjection over " + ri.description;
                c.x = ri.inst.x;
                c.base = category_instance(ri.inst.B);
                c.collapse = collapse_to_base(ri.inst, *c.base);
                break;
            }
            case Family::Category: {
                auto ri = generate_random_wg(sub, spec.bounds);
                auto pos = ri.description.find(", fibers");
                c.description = "category instance of " + ri.description.substr(0, pos);
                c.x = category_instance(ri.inst.B);
                break;
            }
            case Family::RandomHd: {
                auto h = random_hd_category(sub, spec.bounds.max_objects);
                c.description = "constant double category on an hd category with " +
                                std::to_string(h->num_objects()) + " objects and " +
                                std::to_string(h->num_iso_classes()) + " classes";
                c.x = constant_double(h);
                break;
            }
            case Family::Terminal:
                c.description = "terminal double category";
                c.x = terminal_double();
                break;
        }
        out.push_back(std::move(c));
    }
    if (spec.plant_micro) {
        CorpusInstance c;
        c.name = "planted-micro";
        c.family = "planted";
        c.description = "micro counterexample: a single arrow a -> a' with no units";
        c.x = assemble_unchecked(micro_counterexample());
        c.planted = true;
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------- suite

const std::vector<std::string>& all_laws() {
    static const std::vector<std::string> laws{"catwg2", "tr2",         "f2",          "s2",    "t2",
                                               "st",     "roundtrip_x", "roundtrip_y", "kernel"};
    return laws;
}

std::set<std::string> parse_laws(const std::string& csv) {
    std::set<std::string> out;
    if (csv.empty() || csv == "all") {
        out.insert(all_laws().begin(), all_laws().end());
        return out;
    }
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (std::find(all_laws().begin(), all_laws().end(), item) == all_laws().end())
            throw InputError("unknown law group '" + item + "'");
        out.insert(item);
    }
    return out;
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json SuiteReport::to_json() const {
    json j = data;
    j["hash"] = hash;
    j["timing_ms"] = timing;
    return j;
}

namespace {

// p(A x_D B) against pA x_pD pB for a cospan into a discrete D.
json pullback_preservation(const FunctorMap& f, const FunctorMap& g) {
    auto P = pullback(f, g);
    const FinCat& A = *f.source;
    const FinCat& B = *g.source;
    std::set<std::pair<Obj, Obj>> expected;
    for (Obj a = 0; a < A.num_iso_classes(); ++a)
        for (Obj b = 0; b < B.num_iso_classes(); ++b)
            if (f(A.class_members(a).front()) == g(B.class_members(b).front())) expected.insert({a, b});
    std::map<Obj, std::pair<Obj, Obj>> image;
    std::vector<std::string> w;
    for (Obj p = 0; p < P.cat->num_objects(); ++p) {
        auto t = P.tuple(p);
        std::pair<Obj, Obj> cls{A.iso_class(t[0]), B.iso_class(t[1])};
        auto [it, fresh] = image.emplace(P.cat->iso_class(p), cls);
        if (!fresh && it->second != cls) w.push_back("an iso class of the pullback meets two class pairs");
    }
    std::set<std::pair<Obj, Obj>> hit;
    for (const auto& [c, cls] : image)
        if (!hit.insert(cls).second) w.push_back("two iso classes of the pullback over one class pair");
    if (hit != expected) w.push_back("class pairs of the pullback differ from pA x_pD pB");
    return law_entry(w.empty(), w, P.cat->num_objects());
}

json boff_laws(const FunctorMap& f) {
    std::vector<std::string> w;
    auto b = boff_factorize(f);
    if (auto d = functor_difference(compose(b.g, b.v), f); !d.empty()) w.push_back("g v != f: " + d);
    if (b.L->num_objects() != f.source->num_objects()) w.push_back("L has a different object set");
    for (Obj x = 0; x < f.source->num_objects(); ++x)
        if (b.v(x) != x) {
            w.push_back("v is not the identity on objects");
            break;
        }
    if (!equivalence_flags(b.g).fully_faithful) w.push_back("g is not fully faithful");
    return law_entry(w.empty(), w);
}

// A levelwise equivalence must be a 2-equivalence.
json levelwise_implies_2eq(const WGDouble& x, const WGDouble& y, const WGMorphism& f) {
    bool levelwise = equivalence_flags(f.F0).is_equivalence && equivalence_flags(f.F1).is_equivalence;
    if (!levelwise) {
        json e = law_entry(true, {});
        e["vacuous"] = true;
        return e;
    }
    auto t = is_2equivalence_double(x, y, f);
    return flag_entry(t.holds(), t.witness);
}

struct BudgetScope {
    std::size_t saved;
    explicit BudgetScope(std::size_t n) : saved(object_budget()) { set_object_budget(n); }
    ~BudgetScope() { set_object_budget(saved); }
};

template <class F>
json guarded(F&& f) {
    try {
        return f();
    } catch (const BudgetExceeded& e) {
        json j = law_entry(false, {e.what()});
        j["budget_exhausted"] = true;
        return j;
    } catch (const LawViolation& e) {
        return law_entry(false, e.witnesses.empty() ? std::vector<std::string>{e.what()} : e.witnesses);
    } catch (const std::exception& e) {
        return law_entry(false, {std::string("error: ") + e.what()});
    }
}

json failed_dependency(const std::string& what) { return law_entry(false, {what}); }

}  // namespace

json check_instance(const CorpusInstance& inst, const CorpusSpec& spec, const std::set<std::string>& laws,
                    SitePtr delta, SitePtr fat) {
    json out = json::object();
    const WGDouble& x = inst.x;
    const Strategy s = spec.strategy;
    auto want = [&](const char* l) { return laws.count(l) > 0; };

    if (want("catwg2") || inst.planted) {
        out["catwg2"] = guarded([&] {
            auto r = validate_catwg2(x);
            json j = law_entry(r.ok(), r.witnesses);
            j["homotopically_discrete"] = r.homotopically_discrete;
            j["segal_isos"] = r.segal_isos;
            j["induced_equivalences"] = r.induced_equivalences;
            return j;
        });
    }
    if (inst.planted) return out;

    // Corpus morphisms: identities, and the collapse for the surjection family.
    const WGDouble& y = inst.base ? *inst.base : x;
    const WGMorphism f = inst.collapse ? *inst.collapse : identity_morphism(x);

    if (want("tr2")) {
        out["tr2"] = guarded([&] {
            auto tx = tr2_strong_segalic(x, s, delta);
            auto ty = inst.base ? tr2_strong_segalic(y, s, delta) : tx;
            auto nat = tr2_naturality(x, tx, y, ty, f);
            json j = combine({&tx.semi_simplicial, &tx.segal, &nat});
            j["semi_simplicial"] = law_json(tx.semi_simplicial);
            j["segal"] = law_json(tx.segal);
            j["naturality"] = law_json(nat);
            return j;
        });
    }

    std::optional<F2Result> fx;
    std::string f2_error;
    bool need_f2 = want("f2") || want("s2") || want("t2") || want("roundtrip_y");
    if (need_f2) {
        try {
            fx = F2(x, s, fat);
        } catch (const LawViolation& e) {
            f2_error = "F2 is not fair: " + std::string(e.what());
        } catch (const std::exception& e) {
            f2_error = std::string("F2 failed: ") + e.what();
        }
    }

    if (want("f2")) {
        out["f2"] = guarded([&]() -> json {
            if (!fx) return failed_dependency(f2_error);
            auto c = check_F2(x, *fx);
            auto fair = c.fair;
            json j;
            j["fair"] = combine({&fair.presentation, &fair.discrete, &fair.generator_maps, &fair.vertical_maps,
                                 &fair.segal, &fair.induced_segal});
            j["pi1_isomorphic"] = flag_entry(c.pi1_isomorphic, c.pi1_witness);
            j["hom_fibers"] = law_json(c.hom_fibers);
            // F2 on the corpus 2-equivalences.
            auto te = is_2equivalence_double(x, y, f);
            if (te.holds()) {
                auto fy = inst.base ? F2(y, s, fat) : *fx;
                auto fm = F2_morphism(*fx, fy, f);
                auto problems = validate_fair_morphism(fx->fair.p, fy.fair.p, fm);
                auto t2e = is_2equivalence_fair(fx->fair.p, fy.fair.p, fm);
                if (!t2e.holds() && !t2e.witness.empty()) problems.push_back(t2e.witness);
                else if (!t2e.holds()) problems.push_back("F2 of a 2-equivalence is not a 2-equivalence");
                j["preserves_2equivalences"] = law_entry(problems.empty(), problems);
            } else {
                json e = law_entry(true, {});
                e["vacuous"] = true;
                j["preserves_2equivalences"] = e;
            }
            bool pass = entry_pass(j["fair"]) && entry_pass(j["pi1_isomorphic"]) && entry_pass(j["hom_fibers"]) &&
                        entry_pass(j["preserves_2equivalences"]);
            j["pass"] = pass;
            return j;
        });
    }

    if (want("s2")) {
        out["s2"] = guarded([&]() -> json {
            if (!fx) return failed_dependency(f2_error);
            auto r = S2(x, *fx, s, make_nerve(x, delta));
            json j = combine({&r.section, &r.equivalences, &r.naturality});
            j["section"] = law_json(r.section);
            j["equivalences"] = law_json(r.equivalences);
            j["naturality"] = law_json(r.naturality);
            return j;
        });
    }

    if (want("t2")) {
        out["t2"] = guarded([&]() -> json {
            if (!fx) return failed_dependency(f2_error);
            auto r = T2(fx->fair, delta);
            json j = combine({&r.lift_independence, &r.coherence, &r.mono_strict, &r.segal});
            j["lift_independence"] = law_json(r.lift_independence);
            j["arrows_with_several_lifts"] = r.arrows_with_several_lifts;
            j["coherence"] = law_json(r.coherence);
            j["mono_strict"] = law_json(r.mono_strict);
            j["segal"] = law_json(r.segal);
            return j;
        });
    }

    if (want("st") || want("roundtrip_x")) {
        std::optional<RoundTripX> rx;
        std::string rx_error;
        try {
            rx = roundtrip_x(x, s, delta, fat);
        } catch (const std::exception& e) {
            rx_error = e.what();
        }
        if (rx && !rx->error.empty()) rx_error = rx->error;
        if (want("st")) {
            out["st"] = guarded([&]() -> json {
                if (!rx || !rx->r2) return failed_dependency(rx_error.empty() ? "R2 was not built" : rx_error);
                const auto& r2 = *rx->r2;
                const auto& c = r2.checks;
                json j = combine({&c.gv_equals_h, &c.g_equivalences, &c.L_strict, &c.L_segal, &c.h_tuple});
                j["gv_equals_h"] = law_json(c.gv_equals_h);
                j["g_equivalences"] = law_json(c.g_equivalences);
                j["L_strict"] = law_json(c.L_strict);
                j["L_segal"] = law_json(c.L_segal);
                j["h_tuple"] = law_json(c.h_tuple);
                auto w = r2.problems;
                w.insert(w.end(), r2.report.witnesses.begin(), r2.report.witnesses.end());
                j["catwg2_of_output"] = law_entry(r2.x && r2.problems.empty() && r2.report.ok(), w);
                j["pass"] = entry_pass(j) && entry_pass(j["catwg2_of_output"]);
                return j;
            });
        }
        if (want("roundtrip_x")) {
            out["roundtrip_x"] = guarded([&]() -> json {
                if (!rx) return failed_dependency(rx_error);
                if (!rx_error.empty()) return failed_dependency(rx_error);
                const auto& m = rx->map;
                json j = combine({&m.well_defined, &m.naturality, &m.equivalences});
                j["levelwise_equivalence"] = law_json(m.equivalences);
                j["morphism"] = law_entry(rx->morphism_problems.empty(), rx->morphism_problems);
                j["two_equivalence"] = flag_entry(rx->two_equivalence.holds(), rx->two_equivalence.witness);
                j["pass"] = rx->ok();
                return j;
            });
        }
    }

    if (want("roundtrip_y")) {
        out["roundtrip_y"] = guarded([&]() -> json {
            if (!fx) return failed_dependency(f2_error);
            auto r = roundtrip_y(fx->fair, s, delta, fat);
            json j;
            if (!r.error.empty()) {
                j = law_entry(false, {r.error});
                if (r.error.find("budget") != std::string::npos) j["budget_exhausted"] = true;
                return j;
            }
            const auto& c = r.st_checks;
            j = combine({&r.t_equivalences, &c.gv_equals_h, &c.g_equivalences, &c.L_strict, &c.L_segal, &c.h_tuple,
                         &r.g_natural, &r.map.well_defined, &r.map.naturality});
            j["fairwg_of_strictification"] =
                combine({&r.st_fairwg.discrete, &r.st_fairwg.generator_maps, &r.st_fairwg.vertical_maps,
                         &r.st_fairwg.segal, &r.st_fairwg.induced_segal});
            j["leg_to_z"] = flag_entry(r.leg_to_z.holds(), r.leg_to_z.witness);
            j["leg_to_y"] = flag_entry(r.leg_to_y.holds(), r.leg_to_y.witness);
            j["pass"] = r.ok();
            return j;
        });
    }

    if (want("kernel")) {
        out["kernel"] = guarded([&]() -> json {
            json j;
            auto disc = discretize(x.X0);
            auto gg = functor_difference(compose(disc.gamma, disc.gamma_prime), FunctorMap::identity(disc.Xd));
            j["gamma_gamma_prime"] = flag_entry(gg.empty(), gg);
            j["p_pullbacks"] = pullback_preservation(compose(disc.gamma, x.d0), compose(disc.gamma, x.d1));
            j["boff"] = boff_laws(x.d1);
            json lw = levelwise_implies_2eq(x, x, identity_morphism(x));
            if (inst.collapse) {
                json lc = levelwise_implies_2eq(x, y, f);
                if (!entry_pass(lc)) lw = lc;
            }
            j["levelwise_2equivalence"] = lw;
            j["pass"] = entry_pass(j["gamma_gamma_prime"]) && entry_pass(j["p_pullbacks"]) && entry_pass(j["boff"]) &&
                        entry_pass(j["levelwise_2equivalence"]);
            return j;
        });
    }
    return out;
}

SuiteReport run_suite(const CorpusSpec& spec, const std::set<std::string>& laws, unsigned threads) {
    validate_window(spec.window);
    BudgetScope budget(spec.object_budget);
    auto corpus = make_corpus(spec);
    auto delta = make_delta_site(spec.window.max_level);
    auto fat = make_fat_site(spec.window);

    std::vector<json> results(corpus.size());
    std::vector<double> ms(corpus.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < corpus.size();) {
            auto t0 = std::chrono::steady_clock::now();
            results[i] = check_instance(corpus[i], spec, laws, delta, fat);
            ms[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, std::max<std::size_t>(1, corpus.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SuiteReport rep;
    json instances = json::array();
    json failures = json::object();
    std::size_t passed = 0;
    rep.timing = json::object();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& c = corpus[i];
        bool ok = true;
        for (auto& [law, v] : results[i].items()) {
            if (!entry_pass(v)) {
                ok = false;
                failures[law] = failures.value(law, 0) + 1;
            }
        }
        passed += ok;
        json e;
        e["name"] = c.name;
        e["family"] = c.family;
        e["seed"] = c.seed;
        e["description"] = c.description;
        e["objects"] = {{"X0", c.x.X0->num_objects()}, {"X1", c.x.X1->num_objects()},
                        {"X1_morphisms", c.x.X1->num_morphisms()}};
        e["laws"] = results[i];
        e["pass"] = ok;
        instances.push_back(e);
        rep.timing[c.name] = static_cast<long long>(ms[i]);
    }
    rep.all_pass = passed == corpus.size();
    rep.data["tool"] = kToolVersion;
    rep.data["spec"] = spec.to_json();
    rep.data["laws"] = std::vector<std::string>(laws.begin(), laws.end());
    rep.data["rng"] = "splitmix64 sub-seeds per instance, mt19937_64 within an instance";
    rep.data["instances"] = instances;
    rep.data["summary"] = {{"instances", corpus.size()}, {"passed", passed}, {"failures_by_law", failures}};
    rep.data["all_pass"] = rep.all_pass;
    rep.hash = fnv1a_hex(canonical_text(rep.data));
    return rep;
}

}  // namespace wgfair
