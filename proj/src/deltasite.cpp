#include "wgfair/deltasite.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "wgfair/fincat.hpp"

namespace wgfair {

// ---- simplex maps ----

bool SimplexMap::operator<(const SimplexMap& o) const {
    return std::tie(src, tgt, values) < std::tie(o.src, o.tgt, o.values);
}

SimplexMap SimplexMap::identity(int n) {
    SimplexMap m{n, n, {}};
    for (int i = 0; i <= n; ++i) m.values.push_back(i);
    return m;
}

SimplexMap SimplexMap::face(int n, int i) {
    SimplexMap m{n - 1, n, {}};
    for (int k = 0; k < n; ++k) m.values.push_back(k < i ? k : k + 1);
    return m;
}

SimplexMap SimplexMap::degeneracy(int n, int i) {
    SimplexMap m{n + 1, n, {}};
    for (int k = 0; k <= n + 1; ++k) m.values.push_back(k <= i ? k : k - 1);
    return m;
}

bool SimplexMap::valid() const {
    if (src < 0 || tgt < 0 || static_cast<int>(values.size()) != src + 1) return false;
    for (int i = 0; i <= src; ++i) {
        if (values[i] < 0 || values[i] > tgt) return false;
        if (i > 0 && values[i] < values[i - 1]) return false;
    }
    return true;
}

bool SimplexMap::is_mono() const {
    for (int i = 1; i <= src; ++i)
        if (values[i] == values[i - 1]) return false;
    return true;
}

bool SimplexMap::is_epi() const {
    if (values.empty()) return false;
    if (values.front() != 0 || values.back() != tgt) return false;
    for (int i = 1; i <= src; ++i)
        if (values[i] > values[i - 1] + 1) return false;
    return true;
}

std::string SimplexMap::str() const {
    std::ostringstream os;
    os << "[" << src << "]->[" << tgt << "]:";
    for (int i = 0; i <= src; ++i) os << (i ? "," : "") << values[i];
    return os.str();
}

SimplexMap compose(const SimplexMap& g, const SimplexMap& f) {
    if (f.tgt != g.src) throw InputError("simplex maps not composable: " + g.str() + " after " + f.str());
    SimplexMap r{f.src, g.tgt, {}};
    for (int v : f.values) r.values.push_back(g.values[v]);
    return r;
}

std::vector<SimplexMap> enumerate_simplex_maps(int src, int tgt) {
    std::vector<SimplexMap> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int lo) -> void {
        if (static_cast<int>(cur.size()) == src + 1) {
            out.push_back({src, tgt, cur});
            return;
        }
        for (int v = lo; v <= tgt; ++v) {
            cur.push_back(v);
            self(self, v);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

EpiMono epi_mono_factor_delta(const SimplexMap& f) {
    if (!f.valid()) throw InputError("invalid simplex map " + f.str());
    std::vector<int> image;
    for (int v : f.values)
        if (image.empty() || image.back() != v) image.push_back(v);
    int r = static_cast<int>(image.size()) - 1;
    EpiMono em{{f.src, r, {}}, {r, f.tgt, image}};
    int k = 0;
    for (int i = 0; i <= f.src; ++i) {
        if (i > 0 && f.values[i] != f.values[i - 1]) ++k;
        em.eta.values.push_back(k);
    }
    return em;
}

std::vector<SimplexMap> window_simplex_maps(const TruncationWindow& w) {
    std::vector<SimplexMap> out;
    for (int a = 0; a <= w.max_level; ++a)
        for (int b = 0; b <= w.max_level; ++b)
            for (auto& m : enumerate_simplex_maps(a, b)) out.push_back(m);
    return out;
}

// ---- colored ordinals ----

bool ColoredOrdinal::operator<(const ColoredOrdinal& o) const {
    return std::tie(dots, colored) < std::tie(o.dots, o.colored);
}

ColoredOrdinal ColoredOrdinal::plain(int rank) { return {rank + 1, std::vector<bool>(rank, false)}; }

ColoredOrdinal ColoredOrdinal::ze(int links) { return {links + 1, std::vector<bool>(links, true)}; }

ColoredOrdinal ColoredOrdinal::parse(const std::string& s) {
    if (s.empty() || s.size() % 2 == 0) throw InputError("bad colored ordinal '" + s + "'");
    ColoredOrdinal x{static_cast<int>(s.size() / 2) + 1, {}};
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (i % 2 == 0) {
            if (c != 'o') throw InputError("bad colored ordinal '" + s + "': expected 'o' at " + std::to_string(i));
        } else if (c == '-' || c == '=') {
            x.colored.push_back(c == '=');
        } else {
            throw InputError("bad colored ordinal '" + s + "': expected '-' or '=' at " + std::to_string(i));
        }
    }
    return x;
}

std::string ColoredOrdinal::str() const {
    std::string s = "o";
    for (int i = 0; i + 1 < dots; ++i) {
        s += colored[i] ? '=' : '-';
        s += 'o';
    }
    return s;
}

int ColoredOrdinal::rank() const {
    return dots - 1 - static_cast<int>(std::count(colored.begin(), colored.end(), true));
}

int ColoredOrdinal::class_of(int dot) const {
    int c = 0;
    for (int i = 0; i < dot; ++i)
        if (!colored[i]) ++c;
    return c;
}

int ColoredOrdinal::top_of_class(int c) const {
    int k = 0;
    for (int d = 0; d < dots; ++d) {
        bool last = d + 1 == dots || !colored[d];
        if (k == c && last) return d;
        if (!colored.empty() && d + 1 < dots && !colored[d]) ++k;
    }
    throw InputError("class " + std::to_string(c) + " out of range for " + str());
}

int ColoredOrdinal::bottom_of_class(int c) const {
    if (c == 0) return 0;
    return top_of_class(c - 1) + 1;
}

bool ColoredOrdinal::is_plain() const {
    return std::none_of(colored.begin(), colored.end(), [](bool b) { return b; });
}

int pi_object(const ColoredOrdinal& x) { return x.rank(); }

std::vector<ColoredOrdinal> window_objects(const TruncationWindow& w) {
    std::vector<ColoredOrdinal> out;
    for (int d = 1; d <= w.max_dots; ++d)
        for (unsigned bits = 0; bits < (1u << (d - 1)); ++bits) {
            ColoredOrdinal x{d, {}};
            for (int e = 0; e < d - 1; ++e) x.colored.push_back((bits >> (d - 2 - e)) & 1u);
            out.push_back(x);
        }
    return out;
}

void validate_window(const TruncationWindow& w) {
    if (w.max_dots < 2) throw InputError("window needs at least 2 dots");
    if (w.max_level < 3) throw InputError("window needs level 3");
}

// ---- fat maps ----

bool FatMap::operator<(const FatMap& o) const {
    return std::tie(src, tgt, dotmap) < std::tie(o.src, o.tgt, o.dotmap);
}

FatMap FatMap::identity(const ColoredOrdinal& x) {
    FatMap f{x, x, {}};
    for (int i = 0; i < x.dots; ++i) f.dotmap.push_back(i);
    return f;
}

std::vector<int> FatMap::parse_dotmap(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    int expect = 0;
    while (std::getline(ss, item, ',')) {
        auto gt = item.find('>');
        if (gt == std::string::npos) throw InputError("bad dotmap entry '" + item + "'");
        try {
            int a = std::stoi(item.substr(0, gt));
            int b = std::stoi(item.substr(gt + 1));
            if (a != expect) throw InputError("dotmap entries must list dots 0,1,... in order: '" + s + "'");
            out.push_back(b);
            ++expect;
        } catch (const std::logic_error&) {
            throw InputError("bad dotmap entry '" + item + "'");
        }
    }
    if (out.empty()) throw InputError("empty dotmap");
    return out;
}

std::string FatMap::dotmap_str() const {
    std::string s;
    for (std::size_t i = 0; i < dotmap.size(); ++i)
        s += (i ? "," : "") + std::to_string(i) + ">" + std::to_string(dotmap[i]);
    return s;
}

FatMap FatMap::parse(const std::string& s) {
    auto a = s.find(':');
    auto b = a == std::string::npos ? a : s.find(':', a + 1);
    if (b == std::string::npos) throw InputError("fat map must read SRC:TGT:DOTMAP, got '" + s + "'");
    FatMap f{ColoredOrdinal::parse(s.substr(0, a)), ColoredOrdinal::parse(s.substr(a + 1, b - a - 1)),
             parse_dotmap(s.substr(b + 1))};
    if (static_cast<int>(f.dotmap.size()) != f.src.dots)
        throw InputError("dotmap of '" + s + "' does not cover the source dots");
    return f;
}

std::string FatMap::str() const { return src.str() + ":" + tgt.str() + ":" + dotmap_str(); }

std::optional<std::string> validate_fat_map(const FatMap& f) {
    if (static_cast<int>(f.dotmap.size()) != f.src.dots) return "dotmap size differs from source dots";
    for (int i = 0; i < f.src.dots; ++i) {
        if (f.dotmap[i] < 0 || f.dotmap[i] >= f.tgt.dots)
            return "dot " + std::to_string(i) + " maps outside the target";
        if (i > 0 && f.dotmap[i] <= f.dotmap[i - 1])
            return "dots " + std::to_string(i - 1) + "," + std::to_string(i) + " not strictly increasing";
    }
    for (int e = 0; e + 1 < f.src.dots; ++e) {
        if (!f.src.colored[e]) continue;
        for (int t = f.dotmap[e]; t < f.dotmap[e + 1]; ++t)
            if (!f.tgt.colored[t])
                return "colored source edge " + std::to_string(e) + " maps over plain target edge " +
                       std::to_string(t);
    }
    return std::nullopt;
}

FatMap compose(const FatMap& g, const FatMap& f) {
    if (!(f.tgt == g.src))
        throw InputError("fat maps not composable: " + g.str() + " after " + f.str());
    FatMap r{f.src, g.tgt, {}};
    for (int d : f.dotmap) r.dotmap.push_back(g.dotmap[d]);
    return r;
}

FatMap from_mono(const SimplexMap& eps) {
    if (!eps.valid() || !eps.is_mono()) throw InputError("not a mono: " + eps.str());
    return {ColoredOrdinal::plain(eps.src), ColoredOrdinal::plain(eps.tgt), eps.values};
}

SimplexMap pi_map(const FatMap& f) {
    SimplexMap m{f.src.rank(), f.tgt.rank(), std::vector<int>(f.src.rank() + 1, 0)};
    for (int d = 0; d < f.src.dots; ++d) m.values[f.src.class_of(d)] = f.tgt.class_of(f.dotmap[d]);
    return m;
}

std::vector<FatMap> enumerate_hom(const ColoredOrdinal& src, const ColoredOrdinal& tgt) {
    std::vector<FatMap> out;
    FatMap cur{src, tgt, {}};
    auto rec = [&](auto&& self) -> void {
        int i = static_cast<int>(cur.dotmap.size());
        if (i == src.dots) {
            out.push_back(cur);
            return;
        }
        int lo = i == 0 ? 0 : cur.dotmap.back() + 1;
        for (int v = lo; v < tgt.dots - (src.dots - 1 - i); ++v) {
            if (i > 0 && src.colored[i - 1]) {
                bool ok = true;
                for (int t = cur.dotmap.back(); t < v && ok; ++t) ok = tgt.colored[t];
                if (!ok) break;
            }
            cur.dotmap.push_back(v);
            self(self);
            cur.dotmap.pop_back();
        }
    };
    rec(rec);
    return out;
}

SegalCount segal_hom_count(const ColoredOrdinal& k, const ColoredOrdinal& r) {
    SegalCount c;
    c.direct = enumerate_hom(k, r).size();
    if (k.dots == 1) {
        c.edgewise = enumerate_hom(k, r).size();
        return c;
    }
    // ways[d] = number of compatible edge-map strings ending at target dot d.
    std::vector<std::size_t> ways(r.dots, 0);
    for (int e = 0; e + 1 < k.dots; ++e) {
        ColoredOrdinal piece{2, {k.colored[e]}};
        std::vector<std::size_t> next(r.dots, 0);
        for (const auto& m : enumerate_hom(piece, r)) {
            std::size_t in = e == 0 ? 1 : ways[m.dotmap[0]];
            next[m.dotmap[1]] += in;
        }
        ways = std::move(next);
    }
    for (auto w : ways) c.edgewise += w;
    return c;
}

FatEpiMono epi_mono_lift_fat(const FatMap& f) {
    if (auto err = validate_fat_map(f)) throw InputError("invalid fat map " + f.str() + ": " + *err);
    ColoredOrdinal r = f.src;
    for (int e = 0; e + 1 < f.src.dots; ++e)
        if (f.tgt.class_of(f.dotmap[e]) == f.tgt.class_of(f.dotmap[e + 1])) r.colored[e] = true;
    FatEpiMono out{FatMap::identity(f.src), {r, f.tgt, f.dotmap}};
    out.eta.tgt = r;
    return out;
}

FatMap nu_un(int n, const ColoredOrdinal& u) {
    if (u.rank() != n)
        throw InputError("rank mismatch: " + u.str() + " contracts to [" + std::to_string(u.rank()) +
                         "], not [" + std::to_string(n) + "]");
    FatMap f{ColoredOrdinal::plain(n), u, {}};
    for (int j = 0; j <= n; ++j) f.dotmap.push_back(u.top_of_class(j));
    return f;
}

bool preserves_class_tops(const FatMap& eps) {
    for (int c = 0; c <= eps.src.rank(); ++c) {
        int img = eps.dotmap[eps.src.top_of_class(c)];
        if (img != eps.tgt.top_of_class(eps.tgt.class_of(img))) return false;
    }
    return true;
}

bool nu_square_commutes(const FatMap& eps_bar) {
    SimplexMap eps = pi_map(eps_bar);
    FatMap lhs = compose(nu_un(eps.tgt, eps_bar.tgt), from_mono(eps));
    FatMap rhs = compose(eps_bar, nu_un(eps.src, eps_bar.src));
    return lhs == rhs;
}

// ---- pushouts ----

std::string verify_pushout(const FatMap& left, const FatMap& right, const FatMap& inj_left,
                           const FatMap& inj_right, int verify_dots) {
    for (const FatMap* m : {&inj_left, &inj_right})
        if (auto err = validate_fat_map(*m)) return "injection " + m->str() + " invalid: " + *err;
    if (!(compose(inj_left, left) == compose(inj_right, right))) return "injections do not form a cocone";
    const ColoredOrdinal& P = inj_left.tgt;
    TruncationWindow w{verify_dots, 3};
    for (const auto& W : window_objects(w)) {
        auto homP = enumerate_hom(P, W);
        for (const auto& p : enumerate_hom(left.tgt, W)) {
            FatMap pl = compose(p, left);
            for (const auto& q : enumerate_hom(right.tgt, W)) {
                if (!(pl == compose(q, right))) continue;
                int count = 0;
                for (const auto& u : homP)
                    if (compose(u, inj_left) == p && compose(u, inj_right) == q) ++count;
                if (count != 1)
                    return "cocone into " + W.str() + " via " + p.dotmap_str() + " / " + q.dotmap_str() +
                           " has " + std::to_string(count) + " factorizations";
            }
        }
    }
    return "";
}

namespace {

ColoredOrdinal concat(const ColoredOrdinal& a, const ColoredOrdinal& b) {
    ColoredOrdinal p{a.dots + b.dots - 1, a.colored};
    p.colored.insert(p.colored.end(), b.colored.begin(), b.colored.end());
    return p;
}

bool is_class_top_section(const FatMap& f) {
    return f.src.is_plain() && f.tgt.rank() == f.src.rank() && f == nu_un(f.src.rank(), f.tgt);
}

}  // namespace

PushoutResult pushout_fat(const FatMap& left, const FatMap& right, int verify_dots) {
    if (!(left.src == right.src)) throw InputError("span legs have different sources");
    for (const FatMap* m : {&left, &right})
        if (auto err = validate_fat_map(*m)) throw InputError("invalid span leg " + m->str() + ": " + *err);
    PushoutResult res;
    const ColoredOrdinal& A = left.tgt;
    const ColoredOrdinal& B = right.tgt;
    if (left.src.dots == 1 && left.dotmap[0] == A.dots - 1 && right.dotmap[0] == 0) {
        res.object = concat(A, B);
        res.inj_left = {A, res.object, FatMap::identity(A).dotmap};
        res.inj_right = {B, res.object, {}};
        for (int j = 0; j < B.dots; ++j) res.inj_right.dotmap.push_back(A.dots - 1 + j);
    } else if (left.src.dots == 1 && left.dotmap[0] == 0 && right.dotmap[0] == B.dots - 1) {
        res.object = concat(B, A);
        res.inj_right = {B, res.object, FatMap::identity(B).dotmap};
        res.inj_left = {A, res.object, {}};
        for (int j = 0; j < A.dots; ++j) res.inj_left.dotmap.push_back(B.dots - 1 + j);
    } else {
        bool swapped = false;
        const FatMap* sec = &left;
        const FatMap* mono = &right;
        if (!(is_class_top_section(left) && right.tgt.is_plain())) {
            std::swap(sec, mono);
            swapped = true;
        }
        if (!(is_class_top_section(*sec) && mono->tgt.is_plain()))
            throw InputError("unsupported span shape for pushout: " + left.str() + " / " + right.str());
        // Insert a run at mono(s) as long as the class s of the section target.
        const ColoredOrdinal& R = sec->tgt;
        const ColoredOrdinal& N = mono->tgt;
        std::vector<int> run(N.dots, 1);
        for (int s = 0; s < sec->src.dots; ++s)
            run[mono->dotmap[s]] = R.top_of_class(s) - R.bottom_of_class(s) + 1;
        ColoredOrdinal P{0, {}};
        std::vector<int> start(N.dots);
        for (int k = 0; k < N.dots; ++k) {
            if (k > 0) P.colored.push_back(false);
            start[k] = P.dots;
            for (int i = 0; i < run[k]; ++i) {
                if (i > 0) P.colored.push_back(true);
                ++P.dots;
            }
        }
        FatMap from_r{R, P, {}};
        for (int d = 0; d < R.dots; ++d) {
            int s = R.class_of(d);
            from_r.dotmap.push_back(start[mono->dotmap[s]] + d - R.bottom_of_class(s));
        }
        FatMap from_n{N, P, {}};
        for (int k = 0; k < N.dots; ++k) from_n.dotmap.push_back(start[k] + run[k] - 1);
        res.object = P;
        res.inj_left = swapped ? from_n : from_r;
        res.inj_right = swapped ? from_r : from_n;
    }
    res.witness = verify_pushout(left, right, res.inj_left, res.inj_right, verify_dots);
    res.universal = res.witness.empty();
    return res;
}

ColoredOrdinal glue_from_edges(const ColoredOrdinal& x, int verify_dots, bool* all_universal) {
    if (all_universal) *all_universal = true;
    if (x.dots == 1) return x;
    ColoredOrdinal acc{2, {x.colored[0]}};
    ColoredOrdinal dot{1, {}};
    for (int e = 1; e + 1 < x.dots; ++e) {
        ColoredOrdinal piece{2, {x.colored[e]}};
        auto po = pushout_fat(FatMap{dot, acc, {acc.dots - 1}}, FatMap{dot, piece, {0}}, verify_dots);
        if (!po.universal && all_universal) *all_universal = false;
        acc = po.object;
    }
    return acc;
}

// ---- interpolants ----

std::optional<DiagramCheck> Interpolants::first_failure() const {
    for (const auto& d : diagrams)
        if (!d.commutes) return d;
    return std::nullopt;
}

namespace {

struct DiagramBuilder {
    DiagramCheck check;
    explicit DiagramBuilder(std::string name) { check.name = std::move(name), check.commutes = true; }
    void valid(const std::string& label, const FatMap& m) {
        if (!check.commutes) return;
        if (auto err = validate_fat_map(m)) {
            check.commutes = false;
            check.detail = label + " " + m.str() + " is not a map: " + *err;
        }
    }
    void equal(const std::string& label, const FatMap& a, const FatMap& b) {
        if (!check.commutes) return;
        if (!(a == b)) {
            check.commutes = false;
            check.detail = label + ": " + a.str() + " != " + b.str();
        }
    }
};

// Dot maps of the form j -> section(j) on the m+1 dots of rm.
FatMap on_rm(const ColoredOrdinal& rm, const FatMap& from_plain_m) {
    return {rm, from_plain_m.tgt, from_plain_m.dotmap};
}

}  // namespace

Interpolants interpolants(const FatEpiMono& f, const FatEpiMono& f2, int verify_dots) {
    SimplexMap eta = pi_map(f.eta), eps = pi_map(f.eps);
    if (!(pi_map(f2.eta) == eta) || !(pi_map(f2.eps) == eps))
        throw InputError("parallel factorization has different images under pi");
    if (!eta.is_epi() || !eps.is_mono()) throw InputError("factorization is not epi followed by mono");
    const int m = eta.src, r = eta.tgt, n = eps.tgt;

    Interpolants I;
    I.rm = ColoredOrdinal::plain(m);
    for (int j = 0; j < m; ++j) I.rm.colored[j] = eta.values[j] == eta.values[j + 1];

    FatMap nu_m = nu_un(m, f.eta.src), nu_m2 = nu_un(m, f2.eta.src);
    FatMap nu_r = nu_un(r, f.eta.tgt), nu_r2 = nu_un(r, f2.eta.tgt);
    FatMap nu_n = nu_un(n, f.eps.tgt), nu_n2 = nu_un(n, f2.eps.tgt);

    I.r_to_rm = nu_un(r, I.rm);
    I.m_to_rm = {ColoredOrdinal::plain(m), I.rm, FatMap::identity(ColoredOrdinal::plain(m)).dotmap};
    I.rm_to_m = on_rm(I.rm, nu_m);
    I.rm_to_m2 = on_rm(I.rm, nu_m2);
    I.rm_to_r = on_rm(I.rm, compose(f.eta, nu_m));
    I.rm_to_r2 = on_rm(I.rm, compose(f2.eta, nu_m2));

    auto po = pushout_fat(I.r_to_rm, from_mono(eps), verify_dots);
    I.nm = po.object;
    I.rm_to_nm = po.inj_left;
    I.n_to_nm = po.inj_right;
    I.pushout_universal = po.universal;

    auto descend = [&](const FatMap& rm_to_r_bar, const FatMap& eps_bar, const FatMap& nu_nbar) {
        // Dots of a run follow eps_bar after rm -> r; lone dots follow nu.
        FatMap c{I.nm, eps_bar.tgt, std::vector<int>(I.nm.dots, -1)};
        FatMap through = compose(eps_bar, rm_to_r_bar);
        for (int j = 0; j <= m; ++j) c.dotmap[I.rm_to_nm.dotmap[j]] = through.dotmap[j];
        for (int k = 0; k <= n; ++k)
            if (c.dotmap[I.n_to_nm.dotmap[k]] < 0) c.dotmap[I.n_to_nm.dotmap[k]] = nu_nbar.dotmap[k];
        return c;
    };
    I.nm_to_n = descend(I.rm_to_r, f.eps, nu_n);
    I.nm_to_n2 = descend(I.rm_to_r2, f2.eps, nu_n2);

    FatMap eps_plain = from_mono(eps);

    DiagramBuilder d1("D1");
    d1.valid("r(m)->r", I.rm_to_r);
    d1.equal("r -> r(m) -> r", compose(I.rm_to_r, I.r_to_rm), nu_r);

    DiagramBuilder d2("D2");
    d2.valid("n(m)->n", I.nm_to_n);
    d2.equal("n -> n(m) -> n", compose(I.nm_to_n, I.n_to_nm), nu_n);

    DiagramBuilder d3("D3");
    d3.valid("r(m)->m", I.rm_to_m);
    d3.equal("r(m) -> m -> r", compose(f.eta, I.rm_to_m), I.rm_to_r);

    DiagramBuilder d4("D4");
    d4.valid("r(m)->n(m)", I.rm_to_nm);
    d4.valid("n(m)->n", I.nm_to_n);
    if (!I.pushout_universal) {
        d4.check.commutes = false;
        d4.check.detail = "link-insertion square is not a pushout: " + po.witness;
    }
    d4.equal("upper square", compose(I.rm_to_nm, I.r_to_rm), compose(I.n_to_nm, eps_plain));
    d4.equal("lower square", compose(I.nm_to_n, I.rm_to_nm), compose(f.eps, I.rm_to_r));

    DiagramBuilder d5("D5");
    d5.valid("r(m)->r'", I.rm_to_r2);
    d5.equal("r -> r(m) -> r'", compose(I.rm_to_r2, I.r_to_rm), nu_r2);

    DiagramBuilder d6("D6");
    d6.valid("n(m)->n'", I.nm_to_n2);
    d6.equal("n -> n(m) -> n'", compose(I.nm_to_n2, I.n_to_nm), nu_n2);

    DiagramBuilder d7("D7");
    d7.valid("r(m)->m", I.rm_to_m);
    d7.valid("r(m)->m'", I.rm_to_m2);
    d7.equal("m -> r(m) -> m", compose(I.rm_to_m, I.m_to_rm), nu_m);
    d7.equal("m -> r(m) -> m'", compose(I.rm_to_m2, I.m_to_rm), nu_m2);
    d7.equal("r(m) -> m -> r", compose(f.eta, I.rm_to_m), I.rm_to_r);
    d7.equal("r(m) -> m' -> r'", compose(f2.eta, I.rm_to_m2), I.rm_to_r2);
    d7.equal("r -> r(m) -> r", compose(I.rm_to_r, I.r_to_rm), nu_r);
    d7.equal("r -> r(m) -> r'", compose(I.rm_to_r2, I.r_to_rm), nu_r2);

    I.diagrams = {d1.check, d2.check, d3.check, d4.check, d5.check, d6.check, d7.check};
    return I;
}

// ---- lifts of composable strings ----

std::vector<FatMap> lift_string(const std::vector<SimplexMap>& maps) {
    std::vector<FatMap> out;
    if (maps.empty()) return out;
    ColoredOrdinal cur = ColoredOrdinal::plain(maps.front().src);
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const SimplexMap& f = maps[i];
        if (!f.valid()) throw InputError("invalid simplex map " + f.str());
        if (f.src != cur.rank()) throw InputError("maps not composable at position " + std::to_string(i));
        std::vector<int> run(f.tgt + 1, 0);
        for (int d = 0; d < cur.dots; ++d) ++run[f.values[cur.class_of(d)]];
        ColoredOrdinal next{0, {}};
        std::vector<int> start(f.tgt + 1);
        for (int c = 0; c <= f.tgt; ++c) {
            int len = std::max(run[c], 1);
            if (c > 0) next.colored.push_back(false);
            start[c] = next.dots;
            for (int k = 0; k < len; ++k) {
                if (k > 0) next.colored.push_back(true);
                ++next.dots;
            }
        }
        check_budget(static_cast<std::size_t>(next.dots), "lifted fat-delta object");
        FatMap lift{cur, next, {}};
        std::vector<int> used(f.tgt + 1, 0);
        for (int d = 0; d < cur.dots; ++d) {
            int c = f.values[cur.class_of(d)];
            lift.dotmap.push_back(start[c] + used[c]++);
        }
        out.push_back(lift);
        cur = next;
    }
    return out;
}

}  // namespace wgfair
