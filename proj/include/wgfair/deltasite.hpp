#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wgfair {

// A monotone map [src] -> [tgt] in the simplex category; values[i] is the image of i.
struct SimplexMap {
    int src = 0;
    int tgt = 0;
    std::vector<int> values;

    bool operator==(const SimplexMap&) const = default;
    bool operator<(const SimplexMap& o) const;

    static SimplexMap identity(int n);
    // Coface [n-1] -> [n] skipping i.
    static SimplexMap face(int n, int i);
    // Codegeneracy [n+1] -> [n] hitting i twice.
    static SimplexMap degeneracy(int n, int i);

    bool valid() const;
    bool is_mono() const;
    bool is_epi() const;
    bool is_identity() const { return src == tgt && is_mono(); }
    std::string str() const;
};

// g after f.
SimplexMap compose(const SimplexMap& g, const SimplexMap& f);
std::vector<SimplexMap> enumerate_simplex_maps(int src, int tgt);

struct EpiMono {
    SimplexMap eta;  // surjective
    SimplexMap eps;  // injective
};
EpiMono epi_mono_factor_delta(const SimplexMap& f);

// Object of the fat delta: dots joined by plain or colored edges.
struct ColoredOrdinal {
    int dots = 1;
    std::vector<bool> colored;  // size dots - 1

    bool operator==(const ColoredOrdinal&) const = default;
    bool operator<(const ColoredOrdinal& o) const;

    static ColoredOrdinal plain(int rank);
    // ze(k): k+1 dots, every edge colored.
    static ColoredOrdinal ze(int links);
    static ColoredOrdinal parse(const std::string& s);
    std::string str() const;

    int rank() const;  // rank of the contracted ordinal
    int class_of(int dot) const;
    int top_of_class(int c) const;
    int bottom_of_class(int c) const;
    bool is_plain() const;
};

struct FatMap {
    ColoredOrdinal src, tgt;
    std::vector<int> dotmap;

    bool operator==(const FatMap&) const = default;
    bool operator<(const FatMap& o) const;

    static FatMap identity(const ColoredOrdinal& x);
    // "SRC:TGT:0>0,1>2"; the bare dotmap uses the "0>0,1>2" notation.
    static FatMap parse(const std::string& s);
    std::string str() const;
    std::string dotmap_str() const;
    static std::vector<int> parse_dotmap(const std::string& s);
};

// Empty when valid; otherwise the first violation, naming the offending edge.
std::optional<std::string> validate_fat_map(const FatMap& f);
FatMap compose(const FatMap& g, const FatMap& f);
// A mono of the simplex category viewed as a map between plain objects.
FatMap from_mono(const SimplexMap& eps);

int pi_object(const ColoredOrdinal& x);
SimplexMap pi_map(const FatMap& f);

std::vector<FatMap> enumerate_hom(const ColoredOrdinal& src, const ColoredOrdinal& tgt);

struct TruncationWindow {
    int max_dots = 4;
    int max_level = 3;
};
void validate_window(const TruncationWindow& w);
// All colored ordinals with at most max_dots dots, ordered by dots then colors.
std::vector<ColoredOrdinal> window_objects(const TruncationWindow& w);

// Segal hom bijection: |hom(k, r)| against the edgewise fiber product over
// the single-dot hom-sets.
struct SegalCount {
    std::size_t direct = 0;
    std::size_t edgewise = 0;
};
SegalCount segal_hom_count(const ColoredOrdinal& k, const ColoredOrdinal& r);

struct FatEpiMono {
    FatMap eta;  // m -> r
    FatMap eps;  // r -> n
};
// r copies the dots of m and colors every edge whose ends land in one class
// of the target; eta is the identity dotmap and eps carries the dotmap of f.
FatEpiMono epi_mono_lift_fat(const FatMap& f);

// Section n -> u sending dot j to the top dot of the j-th class.
FatMap nu_un(int n, const ColoredOrdinal& u);
bool preserves_class_tops(const FatMap& eps);
// Square nu_n . eps = eps_bar . nu_r for a lift eps_bar of a mono.
bool nu_square_commutes(const FatMap& eps_bar);

struct PushoutResult {
    ColoredOrdinal object;
    FatMap inj_left;   // A -> P
    FatMap inj_right;  // B -> P
    bool universal = false;
    std::string witness;  // first cocone without a unique factorization
};

// Pushout of A <-left- S -right-> B for the two supported shapes: endpoint
// gluing along a single dot, and link insertion (S plain, left a class-top
// section, right a mono into a plain object). The universal property is
// checked against every cocone into objects with at most verify_dots dots.
PushoutResult pushout_fat(const FatMap& left, const FatMap& right, int verify_dots);
// Counts maps P -> W factoring a cocone; used by pushout_fat.
std::string verify_pushout(const FatMap& left, const FatMap& right, const FatMap& inj_left,
                           const FatMap& inj_right, int verify_dots);

// Rebuild an ordinal by iterated endpoint pushouts of one-edge pieces.
ColoredOrdinal glue_from_edges(const ColoredOrdinal& x, int verify_dots, bool* all_universal);

struct DiagramCheck {
    std::string name;
    bool commutes = false;
    std::string detail;
};

struct Interpolants {
    ColoredOrdinal rm;  // r(m): r with one link per collision of eta
    ColoredOrdinal nm;  // n(m): pushout of rm <- r -> n
    FatMap r_to_rm, rm_to_r, rm_to_m, m_to_rm;
    FatMap n_to_nm, rm_to_nm, nm_to_n;
    FatMap rm_to_r2, rm_to_m2, nm_to_n2;  // the primed legs
    bool pushout_universal = false;
    std::vector<DiagramCheck> diagrams;  // D1..D7 in order

    std::optional<DiagramCheck> first_failure() const;
};

// Builds the interpolating objects and maps for a factorization
// m -eta-> r -eps-> n and a parallel one with equal images under pi.
Interpolants interpolants(const FatEpiMono& f, const FatEpiMono& f2, int verify_dots);

// Lifts of composable strings of the simplex category (covariant direction:
// f: [a] -> [b], g: [b] -> [c], h: [c] -> [d]). The source of the first
// lift is plain; each later object gives every target class a run of colored
// edges long enough to receive the dots above it.
std::vector<FatMap> lift_string(const std::vector<SimplexMap>& maps);
inline std::vector<FatMap> lift_pair(const SimplexMap& f, const SimplexMap& g) {
    return lift_string({f, g});
}
inline std::vector<FatMap> lift_triple(const SimplexMap& f, const SimplexMap& g,
                                       const SimplexMap& h) {
    return lift_string({f, g, h});
}

// All maps between window-level objects of the simplex category.
std::vector<SimplexMap> window_simplex_maps(const TruncationWindow& w);

}  // namespace wgfair
