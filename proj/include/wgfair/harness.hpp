#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgfair/comparison.hpp"

namespace wgfair {

using json = nlohmann::json;

// Malformed input; pointer is the JSON pointer of the offending value.
struct SchemaError : InputError {
    std::string pointer;
    SchemaError(std::string ptr, const std::string& what)
        : InputError(ptr + ": " + what), pointer(std::move(ptr)) {}
};

// ---------------------------------------------------------------- IO
//
// Category:  {"objects":[0..n-1], "morphisms":[[id,src,tgt],...],
//             "identities":[[obj,mor],...], "compose":[[g,f,gf],...]}
// Functor:   {"ob":[...], "mor":[...]} with "mor" only for non-thin targets.
// Double:    {"kind":"wgdouble", "X0", "X1", "d0", "d1", "s0",
//             "comp":[[f,g,g_after_f],...], "comp_mor" when X1 is not thin}
// Fair:      {"kind":"fair", "O", "A", "U", "src", "tgt", "srcU", "u",
//             "compA", "compU", and "compA_mor"/"compU_mor" when needed}

json category_to_json(const FinCat& c);
// Structural problems raise SchemaError; law failures raise LawViolation.
CatPtr category_from_json(const json& j, const std::string& ptr = "");
CategoryTable category_table_from_json(const json& j, const std::string& ptr = "");

json functor_to_json(const FunctorMap& f);
FunctorMap functor_from_json(const json& j, CatPtr source, CatPtr target, const std::string& ptr = "");

json wgdouble_to_json(const WGDouble& x);
WGGenerators generators_from_json(const json& j, const std::string& ptr = "");
// Law failures of the generators raise LawViolation.
WGDouble wgdouble_from_json(const json& j, const std::string& ptr = "");

json fair_to_json(const FairPresentation& p);
FairPresentation fair_from_json(const json& j, const std::string& ptr = "");

json load_json(const std::string& path);
// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_text(const json& j);
void store_json(const std::string& path, const json& j);

json law_json(const LawReport& r);

// {"kind":"diagram", "site":"delta"|"fat", "objects":[names], "levels":[category],
//  "arrows":[{"name","src","tgt","act":functor}], "cells":[{"f","g","components"}]}.
// act is the functor level[tgt] -> level[src].
json diagram_to_json(const PseudoDiagram& d);
// {"src":"o-o", "tgt":"o=o-o", "dotmap":"0>0,1>2", "text":"o-o:o=o-o:0>0,1>2"}
json fatmap_to_json(const FatMap& f);

// ---------------------------------------------------------------- corpus

enum class Family { Surjection, Category, RandomHd, Terminal };
std::string family_name(Family f);
Family parse_family(const std::string& s);

struct CorpusSpec {
    std::uint64_t seed = 0;
    int count = 50;
    GenBounds bounds;
    std::vector<Family> families{Family::Surjection, Family::Category, Family::RandomHd, Family::Terminal};
    Strategy strategy = Strategy::Cleavage;
    TruncationWindow window;
    bool plant_micro = false;  // append the micro counterexample
    // Largest category a construction may materialize during the run.
    std::size_t object_budget = 6'000'000;

    json to_json() const;
    static CorpusSpec from_json(const json& j);
};

struct CorpusInstance {
    std::string name;
    std::string family;
    std::uint64_t seed = 0;
    std::string description;
    WGDouble x;
    bool planted = false;  // assembled without law checks
    // Surjection family: the collapse onto the category instance of the base.
    std::optional<WGDouble> base;
    std::optional<WGMorphism> collapse;
};

// splitmix64 stream; instance i of the corpus uses the i-th output.
std::uint64_t splitmix64(std::uint64_t& state);
std::vector<CorpusInstance> make_corpus(const CorpusSpec& spec);

// The constant double category on a homotopically discrete category:
// X1 = X0 with identities for faces and units.
WGDouble constant_double(const CatPtr& hd);
CatPtr random_hd_category(std::uint64_t seed, int max_objects);

// ---------------------------------------------------------------- suite

// Law groups, in report order.
const std::vector<std::string>& all_laws();
std::set<std::string> parse_laws(const std::string& csv);

struct SuiteReport {
    json data;          // canonical content, hashed
    json timing;        // per-instance milliseconds, not hashed
    std::string hash;   // FNV-1a over canonical_text(data)
    bool all_pass = false;
    json to_json() const;
};

std::string fnv1a_hex(const std::string& s);

// Runs the selected law groups on every corpus instance; instances are
// processed by up to `threads` workers (0 = hardware concurrency).
SuiteReport run_suite(const CorpusSpec& spec, const std::set<std::string>& laws, unsigned threads = 0);

// Checks of one instance, as {"law": {"pass": bool, "checked": n, "witnesses": [...]}}.
json check_instance(const CorpusInstance& inst, const CorpusSpec& spec, const std::set<std::string>& laws,
                    SitePtr delta, SitePtr fat);

extern const char* const kToolVersion;

}  // namespace wgfair
