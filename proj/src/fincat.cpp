#include "wgfair/fincat.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace wgfair {

namespace {

std::atomic<std::size_t> g_budget{3'000'000};

std::uint64_t key2(std::uint64_t a, std::uint64_t b) { return (a << 32) | b; }

struct UnionFind {
    std::vector<Obj> p;
    explicit UnionFind(Obj n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    Obj find(Obj x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(Obj a, Obj b) {
        a = find(a);
        b = find(b);
        if (a != b) p[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::size_t object_budget() { return g_budget.load(); }
void set_object_budget(std::size_t n) { g_budget.store(n); }

void check_budget(std::size_t n, const char* what) {
    if (n > object_budget()) {
        std::ostringstream os;
        os << "object budget exceeded in " << what << " (" << n << " > " << object_budget()
           << ")";
        throw BudgetExceeded(os.str());
    }
}

// ---------------------------------------------------------------- FinCat

CatPtr FinCat::make_explicit(Obj nobj, std::vector<Obj> src, std::vector<Obj> tgt,
                             std::vector<Mor> identity,
                             const std::vector<std::array<Mor, 3>>& compose) {
    auto c = std::shared_ptr<FinCat>(new FinCat());
    c->mode_ = Mode::Explicit;
    c->nobj_ = nobj;
    c->nmor_ = static_cast<Mor>(src.size());
    c->src_ = std::move(src);
    c->tgt_ = std::move(tgt);
    c->ident_ = std::move(identity);
    c->out_.assign(nobj, {});
    for (Mor m = 0; m < c->nmor_; ++m) {
        c->homs_[key2(c->src_[m], c->tgt_[m])].push_back(m);
        c->out_[c->src_[m]].push_back(m);
    }
    c->comp_.reserve(compose.size() * 2);
    for (const auto& e : compose)
        c->comp_[static_cast<std::uint64_t>(e[0]) * c->nmor_ + e[1]] = e[2];
    c->thin_ = true;
    for (const auto& [k, v] : c->homs_)
        if (v.size() > 1) c->thin_ = false;
    c->discrete_ = c->nmor_ == nobj;
    c->inverse_.assign(c->nmor_, -1);
    for (Mor m = 0; m < c->nmor_; ++m) {
        auto it = c->homs_.find(key2(c->tgt_[m], c->src_[m]));
        if (it == c->homs_.end()) continue;
        for (Mor h : it->second) {
            auto a = c->comp_.find(static_cast<std::uint64_t>(h) * c->nmor_ + m);
            auto b = c->comp_.find(static_cast<std::uint64_t>(m) * c->nmor_ + h);
            if (a != c->comp_.end() && b != c->comp_.end() &&
                a->second == c->ident_[c->src_[m]] && b->second == c->ident_[c->tgt_[m]]) {
                c->inverse_[m] = h;
                break;
            }
        }
    }
    c->finish_classes();
    return c;
}

void FinCat::finish_classes() {
    std::vector<Obj> root(nobj_);
    if (mode_ == Mode::Explicit) {
        UnionFind uf(nobj_);
        for (Mor m = 0; m < nmor_; ++m)
            if (inverse_[m] >= 0) uf.unite(src_[m], tgt_[m]);
        for (Obj x = 0; x < nobj_; ++x) root[x] = uf.find(x);
    } else {
        root = cls_;
    }
    std::unordered_map<Obj, Obj> renum;
    cls_.assign(nobj_, 0);
    members_.clear();
    pos_.assign(nobj_, 0);
    for (Obj x = 0; x < nobj_; ++x) {
        auto [it, fresh] = renum.emplace(root[x], static_cast<Obj>(members_.size()));
        if (fresh) members_.emplace_back();
        cls_[x] = it->second;
        pos_[x] = static_cast<Obj>(members_[it->second].size());
        members_[it->second].push_back(x);
    }
    nclasses_ = static_cast<Obj>(members_.size());
}

CatPtr FinCat::make_equivalence(const std::vector<std::int64_t>& labels) {
    check_budget(labels.size(), "make_equivalence");
    auto c = std::shared_ptr<FinCat>(new FinCat());
    c->mode_ = Mode::Equivalence;
    c->nobj_ = static_cast<Obj>(labels.size());
    std::unordered_map<std::int64_t, Obj> renum;
    c->cls_.resize(labels.size());
    for (std::size_t x = 0; x < labels.size(); ++x) {
        auto [it, fresh] = renum.emplace(labels[x], static_cast<Obj>(renum.size()));
        c->cls_[x] = it->second;
    }
    c->finish_classes();
    c->base_.resize(c->nclasses_ + 1);
    c->base_[0] = 0;
    c->discrete_ = true;
    for (Obj k = 0; k < c->nclasses_; ++k) {
        Mor s = static_cast<Mor>(c->members_[k].size());
        c->base_[k + 1] = c->base_[k] + s * s;
        if (s > 1) c->discrete_ = false;
    }
    c->nmor_ = c->base_[c->nclasses_];
    c->thin_ = true;
    return c;
}

CatPtr FinCat::discrete(Obj n) {
    std::vector<std::int64_t> l(n);
    std::iota(l.begin(), l.end(), 0);
    return make_equivalence(l);
}

CatPtr FinCat::chaotic(Obj n) { return make_equivalence(std::vector<std::int64_t>(n, 0)); }

Obj FinCat::src(Mor m) const {
    if (mode_ == Mode::Explicit) return src_[m];
    Obj k = static_cast<Obj>(std::upper_bound(base_.begin(), base_.end(), m) - base_.begin()) - 1;
    Mor s = static_cast<Mor>(members_[k].size());
    return members_[k][(m - base_[k]) / s];
}

Obj FinCat::tgt(Mor m) const {
    if (mode_ == Mode::Explicit) return tgt_[m];
    Obj k = static_cast<Obj>(std::upper_bound(base_.begin(), base_.end(), m) - base_.begin()) - 1;
    Mor s = static_cast<Mor>(members_[k].size());
    return members_[k][(m - base_[k]) % s];
}

Mor FinCat::identity(Obj x) const {
    if (mode_ == Mode::Explicit) return ident_[x];
    return thin_hom(x, x);
}

Mor FinCat::thin_hom(Obj x, Obj y) const {
    if (mode_ == Mode::Equivalence) {
        Obj k = cls_[x];
        if (cls_[y] != k) return -1;
        Mor s = static_cast<Mor>(members_[k].size());
        return base_[k] + pos_[x] * s + pos_[y];
    }
    auto it = homs_.find(key2(x, y));
    if (it == homs_.end()) return -1;
    return it->second.front();
}

Mor FinCat::compose(Mor g, Mor f) const {
    if (mode_ == Mode::Equivalence) return thin_hom(src(f), tgt(g));
    auto it = comp_.find(static_cast<std::uint64_t>(g) * nmor_ + f);
    if (it == comp_.end()) throw std::logic_error("compose: pair not composable");
    return it->second;
}

std::vector<Mor> FinCat::hom(Obj x, Obj y) const {
    if (mode_ == Mode::Equivalence) {
        Mor m = thin_hom(x, y);
        if (m < 0) return {};
        return {m};
    }
    auto it = homs_.find(key2(x, y));
    if (it == homs_.end()) return {};
    return it->second;
}

std::size_t FinCat::hom_size(Obj x, Obj y) const {
    if (mode_ == Mode::Equivalence) return cls_[x] == cls_[y] ? 1 : 0;
    auto it = homs_.find(key2(x, y));
    return it == homs_.end() ? 0 : it->second.size();
}

std::vector<Mor> FinCat::out(Obj x) const {
    if (mode_ == Mode::Explicit) return out_[x];
    std::vector<Mor> r;
    for (Obj y : members_[cls_[x]]) r.push_back(thin_hom(x, y));
    return r;
}

bool FinCat::is_iso(Mor m) const {
    if (mode_ == Mode::Equivalence) return true;
    return inverse_[m] >= 0;
}

std::optional<Mor> FinCat::inverse(Mor m) const {
    if (mode_ == Mode::Equivalence) return thin_hom(tgt(m), src(m));
    if (inverse_[m] < 0) return std::nullopt;
    return inverse_[m];
}

std::vector<std::array<Mor, 3>> FinCat::composition_table() const {
    std::vector<std::array<Mor, 3>> t;
    if (mode_ == Mode::Explicit) {
        t.reserve(comp_.size());
        for (const auto& [k, v] : comp_)
            t.push_back({static_cast<Mor>(k / nmor_), static_cast<Mor>(k % nmor_), v});
    } else {
        for (Obj k = 0; k < nclasses_; ++k)
            for (Obj x : members_[k])
                for (Obj y : members_[k])
                    for (Obj z : members_[k])
                        t.push_back({thin_hom(y, z), thin_hom(x, y), thin_hom(x, z)});
    }
    std::sort(t.begin(), t.end());
    return t;
}

// ---------------------------------------------------------------- functors

Mor FunctorMap::map_mor(Mor m) const {
    if (target->is_thin()) return target->thin_hom(ob[source->src(m)], ob[source->tgt(m)]);
    return mor[m];
}

FunctorMap FunctorMap::identity(CatPtr c) {
    FunctorMap f;
    f.source = c;
    f.target = c;
    f.ob.resize(c->num_objects());
    std::iota(f.ob.begin(), f.ob.end(), 0);
    if (!c->is_thin()) {
        f.mor.resize(c->num_morphisms());
        std::iota(f.mor.begin(), f.mor.end(), 0);
    }
    return f;
}

FunctorMap FunctorMap::from_functions(CatPtr s, CatPtr t, const std::function<Obj(Obj)>& fo,
                                      const std::function<Mor(Mor)>& fm) {
    FunctorMap f;
    f.source = s;
    f.target = t;
    f.ob.resize(s->num_objects());
    for (Obj x = 0; x < s->num_objects(); ++x) f.ob[x] = fo(x);
    if (!t->is_thin()) {
        if (!fm) throw std::logic_error("from_functions: morphism map required");
        f.mor.resize(s->num_morphisms());
        for (Mor m = 0; m < s->num_morphisms(); ++m) f.mor[m] = fm(m);
    }
    return f;
}

FunctorMap compose(const FunctorMap& g, const FunctorMap& f) {
    FunctorMap h;
    h.source = f.source;
    h.target = g.target;
    h.ob.resize(f.ob.size());
    for (std::size_t x = 0; x < f.ob.size(); ++x) h.ob[x] = g.ob[f.ob[x]];
    if (!h.target->is_thin()) {
        h.mor.resize(f.source->num_morphisms());
        for (Mor m = 0; m < f.source->num_morphisms(); ++m) h.mor[m] = g.map_mor(f.map_mor(m));
    }
    return h;
}

std::vector<std::string> validate_functor(const FunctorMap& f) {
    std::vector<std::string> errs;
    const FinCat& A = *f.source;
    const FinCat& B = *f.target;
    if (static_cast<Obj>(f.ob.size()) != A.num_objects()) {
        errs.push_back("object map has wrong size");
        return errs;
    }
    for (Obj x = 0; x < A.num_objects(); ++x)
        if (f.ob[x] < 0 || f.ob[x] >= B.num_objects()) {
            errs.push_back("object " + std::to_string(x) + " maps outside the target");
            return errs;
        }
    if (B.is_thin()) {
        auto need = [&](Obj x, Obj y) {
            if (B.hom_size(f.ob[x], f.ob[y]) == 0)
                errs.push_back("no image for a morphism " + std::to_string(x) + "->" +
                               std::to_string(y));
        };
        if (A.mode() == FinCat::Mode::Equivalence) {
            for (Obj k = 0; k < A.num_iso_classes() && errs.empty(); ++k) {
                const auto& mem = A.class_members(k);
                for (std::size_t i = 0; i + 1 < mem.size(); ++i) {
                    need(mem[i], mem[i + 1]);
                    need(mem[i + 1], mem[i]);
                }
            }
        } else {
            for (Mor m = 0; m < A.num_morphisms() && errs.empty(); ++m) need(A.src(m), A.tgt(m));
        }
        return errs;
    }
    if (static_cast<Mor>(f.mor.size()) != A.num_morphisms()) {
        errs.push_back("morphism map has wrong size");
        return errs;
    }
    for (Mor m = 0; m < A.num_morphisms(); ++m) {
        Mor fm = f.mor[m];
        if (fm < 0 || fm >= B.num_morphisms() || B.src(fm) != f.ob[A.src(m)] ||
            B.tgt(fm) != f.ob[A.tgt(m)]) {
            errs.push_back("morphism " + std::to_string(m) + " has inconsistent image");
            return errs;
        }
    }
    for (Obj x = 0; x < A.num_objects(); ++x)
        if (f.mor[A.identity(x)] != B.identity(f.ob[x])) {
            errs.push_back("identity of object " + std::to_string(x) + " not preserved");
            return errs;
        }
    for (const auto& e : A.composition_table())
        if (B.compose(f.mor[e[0]], f.mor[e[1]]) != f.mor[e[2]]) {
            errs.push_back("composite (" + std::to_string(e[0]) + "," + std::to_string(e[1]) +
                           ") not preserved");
            return errs;
        }
    return errs;
}

std::string functor_difference(const FunctorMap& a, const FunctorMap& b) {
    if (a.ob.size() != b.ob.size()) return "different sources";
    for (std::size_t x = 0; x < a.ob.size(); ++x)
        if (a.ob[x] != b.ob[x])
            return "object " + std::to_string(x) + ": " + std::to_string(a.ob[x]) + " vs " +
                   std::to_string(b.ob[x]);
    if (!a.target->is_thin())
        for (Mor m = 0; m < a.source->num_morphisms(); ++m)
            if (a.map_mor(m) != b.map_mor(m)) return "morphism " + std::to_string(m);
    return {};
}

bool functor_equal(const FunctorMap& a, const FunctorMap& b) {
    return functor_difference(a, b).empty();
}

NatTransf make_nat(FunctorMap from, FunctorMap to, std::vector<Mor> comp) {
    NatTransf t{std::move(from), std::move(to), std::move(comp), true};
    for (Mor c : t.comp)
        if (!t.to.target->is_iso(c)) t.iso = false;
    return t;
}

std::vector<std::string> validate_nat(const NatTransf& t) {
    std::vector<std::string> errs;
    const FinCat& A = *t.from.source;
    const FinCat& B = *t.from.target;
    if (static_cast<Obj>(t.comp.size()) != A.num_objects()) {
        errs.push_back("component count mismatch");
        return errs;
    }
    for (Obj x = 0; x < A.num_objects(); ++x) {
        Mor c = t.comp[x];
        if (c < 0 || B.src(c) != t.from.ob[x] || B.tgt(c) != t.to.ob[x]) {
            errs.push_back("component at " + std::to_string(x) + " has wrong endpoints");
            return errs;
        }
    }
    if (B.is_thin()) return errs;
    for (Mor m = 0; m < A.num_morphisms(); ++m) {
        Obj x = A.src(m), y = A.tgt(m);
        if (B.compose(t.to.map_mor(m), t.comp[x]) != B.compose(t.comp[y], t.from.map_mor(m))) {
            errs.push_back("naturality fails at morphism " + std::to_string(m));
            return errs;
        }
    }
    return errs;
}

// ---------------------------------------------------------------- tables

ValidationReport validate_category(const CategoryTable& t) {
    ValidationReport r;
    const long long n = static_cast<long long>(t.objects.size());
    const long long M = static_cast<long long>(t.morphisms.size());
    std::vector<char> seen(n, 0);
    for (long long o : t.objects) {
        if (o < 0 || o >= n || seen[o]) {
            r.structural.push_back("object ids are not dense: " + std::to_string(o));
            return r;
        }
        seen[o] = 1;
    }
    std::vector<long long> src(M, -1), tgt(M, -1);
    std::vector<char> mseen(M, 0);
    for (const auto& row : t.morphisms) {
        if (row.id < 0 || row.id >= M || mseen[row.id]) {
            r.structural.push_back("morphism ids are not dense: " + std::to_string(row.id));
            return r;
        }
        mseen[row.id] = 1;
        if (row.src < 0 || row.src >= n || row.tgt < 0 || row.tgt >= n) {
            r.structural.push_back("dangling endpoint on morphism " + std::to_string(row.id));
            continue;
        }
        src[row.id] = row.src;
        tgt[row.id] = row.tgt;
    }
    std::vector<long long> ident(n, -1);
    for (const auto& [o, m] : t.identities) {
        if (o < 0 || o >= n || m < 0 || m >= M) {
            r.structural.push_back("dangling identity entry for object " + std::to_string(o));
            continue;
        }
        if (ident[o] >= 0) r.structural.push_back("duplicate identity for " + std::to_string(o));
        ident[o] = m;
    }
    for (long long o = 0; o < n; ++o)
        if (ident[o] < 0) r.structural.push_back("missing identity for " + std::to_string(o));
    if (!r.structural.empty()) return r;

    std::map<std::pair<long long, long long>, long long> comp;
    for (const auto& e : t.compose) {
        long long g = e[0], f = e[1], gf = e[2];
        if (g < 0 || g >= M || f < 0 || f >= M || gf < 0 || gf >= M) {
            r.structural.push_back("dangling id in compose entry");
            continue;
        }
        if (tgt[f] != src[g]) {
            r.structural.push_back("compose entry for non-composable pair (" + std::to_string(g) +
                                   "," + std::to_string(f) + ")");
            continue;
        }
        if (!comp.emplace(std::make_pair(g, f), gf).second)
            r.structural.push_back("duplicate compose entry (" + std::to_string(g) + "," +
                                   std::to_string(f) + ")");
    }
    for (long long f = 0; f < M; ++f)
        for (long long g = 0; g < M; ++g)
            if (tgt[f] == src[g] && !comp.count({g, f}))
                r.structural.push_back("missing composite (" + std::to_string(g) + "," +
                                       std::to_string(f) + ")");
    if (!r.structural.empty()) return r;

    for (long long o = 0; o < n; ++o)
        if (src[ident[o]] != o || tgt[ident[o]] != o)
            r.laws.push_back("identity of " + std::to_string(o) + " has wrong endpoints");
    for (const auto& [k, gf] : comp) {
        auto [g, f] = k;
        if (src[gf] != src[f] || tgt[gf] != tgt[g])
            r.laws.push_back("src/tgt mismatch for composite (" + std::to_string(g) + "," +
                             std::to_string(f) + ")");
    }
    for (long long f = 0; f < M; ++f) {
        if (comp.at({ident[tgt[f]], f}) != f || comp.at({f, ident[src[f]]}) != f)
            r.laws.push_back("unit law fails at morphism " + std::to_string(f));
    }
    std::size_t broken = 0;
    for (const auto& [k1, gf] : comp) {
        auto [g, f] = k1;
        for (long long h = 0; h < M; ++h) {
            if (src[h] != tgt[g]) continue;
            long long lhs = comp.at({comp.at({h, g}), f});
            long long rhs = comp.at({h, gf});
            if (lhs != rhs && ++broken <= 20)
                r.laws.push_back("associativity fails at triple (" + std::to_string(h) + "," +
                                 std::to_string(g) + "," + std::to_string(f) + ")");
        }
    }
    if (broken > 20)
        r.laws.push_back(std::to_string(broken - 20) + " further associativity failures");
    return r;
}

CatPtr build_category(const CategoryTable& t) {
    auto rep = validate_category(t);
    if (!rep.ok()) {
        std::string msg = !rep.structural.empty() ? rep.structural.front() : rep.laws.front();
        throw InputError("invalid category: " + msg);
    }
    Obj n = static_cast<Obj>(t.objects.size());
    std::vector<Obj> src(t.morphisms.size()), tgt(t.morphisms.size());
    for (const auto& row : t.morphisms) {
        src[row.id] = static_cast<Obj>(row.src);
        tgt[row.id] = static_cast<Obj>(row.tgt);
    }
    std::vector<Mor> ident(n);
    for (const auto& [o, m] : t.identities) ident[o] = m;
    std::vector<std::array<Mor, 3>> comp;
    comp.reserve(t.compose.size());
    for (const auto& e : t.compose) comp.push_back({e[0], e[1], e[2]});
    return FinCat::make_explicit(n, std::move(src), std::move(tgt), std::move(ident), comp);
}

CategoryTable to_table(const FinCat& c) {
    CategoryTable t;
    for (Obj x = 0; x < c.num_objects(); ++x) t.objects.push_back(x);
    for (Mor m = 0; m < c.num_morphisms(); ++m) t.morphisms.push_back({m, c.src(m), c.tgt(m)});
    for (Obj x = 0; x < c.num_objects(); ++x) t.identities.push_back({x, c.identity(x)});
    for (const auto& e : c.composition_table()) t.compose.push_back({e[0], e[1], e[2]});
    return t;
}

ValidationReport validate_category(const FinCat& c) {
    if (c.mode() == FinCat::Mode::Equivalence) return {};
    return validate_category(to_table(c));
}

// ---------------------------------------------------------------- decisions

IsoClasses iso_classes(const FinCat& c) { return {c.num_iso_classes(), c.iso_labels()}; }

std::vector<Obj> iso_class_map(const FunctorMap& f) {
    std::vector<Obj> r(f.source->num_iso_classes());
    for (Obj k = 0; k < f.source->num_iso_classes(); ++k)
        r[k] = f.target->iso_class(f.ob[f.source->class_members(k).front()]);
    return r;
}

HdResult is_homotopically_discrete(const FinCat& c) {
    if (c.mode() == FinCat::Mode::Equivalence) return {};
    for (Mor m = 0; m < c.num_morphisms(); ++m) {
        if (!c.is_iso(m)) return {false, m};
        if (c.src(m) == c.tgt(m) && m != c.identity(c.src(m))) return {false, m};
    }
    return {};
}

Discretization discretize(const CatPtr& c) {
    auto hd = is_homotopically_discrete(*c);
    if (!hd.hd)
        throw InputError("discretize: not homotopically discrete (morphism " +
                         std::to_string(*hd.witness) + ")");
    Discretization d;
    d.Xd = FinCat::discrete(c->num_iso_classes());
    d.gamma.source = c;
    d.gamma.target = d.Xd;
    d.gamma.ob = c->iso_labels();
    d.gamma_prime.source = d.Xd;
    d.gamma_prime.target = c;
    for (Obj k = 0; k < c->num_iso_classes(); ++k)
        d.gamma_prime.ob.push_back(c->class_members(k).front());
    return d;
}

Mor min_iso(const FinCat& c, Obj x, Obj y) {
    if (c.iso_class(x) != c.iso_class(y)) return -1;
    for (Mor m : c.hom(x, y))
        if (c.is_iso(m)) return m;
    return -1;
}

// ---------------------------------------------------------------- fiber products

Obj FiberProduct::find(const Obj* t) const {
    std::size_t lo = 0, hi = tuples.size() / std::max<std::size_t>(arity, 1);
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        const Obj* m = tuples.data() + mid * arity;
        if (std::lexicographical_compare(m, m + arity, t, t + arity))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo * arity < tuples.size() && std::equal(t, t + arity, tuples.data() + lo * arity))
        return static_cast<Obj>(lo);
    return -1;
}

Mor FiberProduct::component(Mor m, std::size_t i) const {
    if (cat->mode() == FinCat::Mode::Explicit) return mor_tuples[m * arity + i];
    return factors[i]->thin_hom(tuple(cat->src(m))[i], tuple(cat->tgt(m))[i]);
}

Mor FiberProduct::find_mor(const std::vector<Mor>& comps) const {
    std::vector<Obj> s(arity), t(arity);
    for (std::size_t i = 0; i < arity; ++i) {
        s[i] = factors[i]->src(comps[i]);
        t[i] = factors[i]->tgt(comps[i]);
    }
    Obj a = find(s), b = find(t);
    if (a < 0 || b < 0) return -1;
    if (cat->mode() == FinCat::Mode::Equivalence) return cat->thin_hom(a, b);
    for (Mor m : cat->hom(a, b)) {
        bool eq = true;
        for (std::size_t i = 0; i < arity && eq; ++i) eq = mor_tuples[m * arity + i] == comps[i];
        if (eq) return m;
    }
    return -1;
}

FunctorMap FiberProduct::projection(std::size_t i) const {
    FunctorMap f;
    f.source = cat;
    f.target = factors[i];
    f.ob.resize(cat->num_objects());
    for (Obj x = 0; x < cat->num_objects(); ++x) f.ob[x] = tuple(x)[i];
    if (!factors[i]->is_thin()) {
        f.mor.resize(cat->num_morphisms());
        for (Mor m = 0; m < cat->num_morphisms(); ++m) f.mor[m] = component(m, i);
    }
    return f;
}

FunctorMap FiberProduct::pair_functor(const std::vector<FunctorMap>& legs) const {
    FunctorMap f;
    f.source = legs.front().source;
    f.target = cat;
    std::vector<Obj> t(arity);
    f.ob.resize(f.source->num_objects());
    for (Obj x = 0; x < f.source->num_objects(); ++x) {
        for (std::size_t i = 0; i < arity; ++i) t[i] = legs[i].ob[x];
        f.ob[x] = find(t);
        if (f.ob[x] < 0) throw std::logic_error("pair_functor: cone does not land in the product");
    }
    if (!cat->is_thin()) {
        f.mor.resize(f.source->num_morphisms());
        std::vector<Mor> c(arity);
        for (Mor m = 0; m < f.source->num_morphisms(); ++m) {
            for (std::size_t i = 0; i < arity; ++i) c[i] = legs[i].map_mor(m);
            f.mor[m] = find_mor(c);
        }
    }
    return f;
}

std::size_t chain_pullback_size(const std::vector<CatPtr>& factors,
                                const std::vector<FunctorMap>& right,
                                const std::vector<FunctorMap>& left) {
    std::vector<double> cnt(factors[0]->num_objects(), 1.0);
    for (std::size_t i = 1; i < factors.size(); ++i) {
        std::vector<double> agg(right[i - 1].target->num_objects(), 0.0);
        for (Obj o = 0; o < factors[i - 1]->num_objects(); ++o) agg[right[i - 1].ob[o]] += cnt[o];
        std::vector<double> next(factors[i]->num_objects());
        for (Obj o = 0; o < factors[i]->num_objects(); ++o) next[o] = agg[left[i - 1].ob[o]];
        cnt.swap(next);
    }
    double total = 0;
    for (double c : cnt) total += c;
    return total > 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(total);
}

FiberProduct chain_pullback(const std::vector<CatPtr>& factors,
                            const std::vector<FunctorMap>& right,
                            const std::vector<FunctorMap>& left) {
    const std::size_t k = factors.size();
    if (right.size() + 1 != k || left.size() + 1 != k)
        throw std::logic_error("chain_pullback: leg count mismatch");
    for (std::size_t i = 0; i + 1 < k; ++i)
        if (right[i].target->num_objects() != left[i].target->num_objects())
            throw InputError("pullback: mismatched targets");
    check_budget(chain_pullback_size(factors, right, left), "fiber product");

    FiberProduct fp;
    fp.factors = factors;
    fp.arity = k;
    std::vector<std::vector<std::vector<Obj>>> by_base(k);
    for (std::size_t i = 1; i < k; ++i) {
        by_base[i].assign(left[i - 1].target->num_objects(), {});
        for (Obj o = 0; o < factors[i]->num_objects(); ++o)
            by_base[i][left[i - 1].ob[o]].push_back(o);
    }
    std::vector<Obj> cur(k);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == k) {
            fp.tuples.insert(fp.tuples.end(), cur.begin(), cur.end());
            return;
        }
        for (Obj o : by_base[i][right[i - 1].ob[cur[i - 1]]]) {
            cur[i] = o;
            rec(i + 1);
        }
    };
    for (Obj o = 0; o < factors[0]->num_objects(); ++o) {
        cur[0] = o;
        rec(1);
    }
    const Obj n = static_cast<Obj>(fp.tuples.size() / k);

    bool equiv = true;
    for (const auto& f : factors) equiv = equiv && f->mode() == FinCat::Mode::Equivalence;
    for (const auto& r : right) equiv = equiv && r.target->is_thin();
    if (equiv) {
        std::vector<std::int64_t> labels(n);
        std::unordered_map<std::uint64_t, std::int64_t> step;
        for (Obj x = 0; x < n; ++x) {
            std::int64_t lab = factors[0]->iso_class(fp.tuple(x)[0]);
            for (std::size_t i = 1; i < k; ++i) {
                auto key = key2(static_cast<std::uint64_t>(lab), factors[i]->iso_class(fp.tuple(x)[i]));
                auto [it, fresh] = step.emplace(key, static_cast<std::int64_t>(step.size()) + (1LL << 31));
                lab = it->second;
            }
            labels[x] = lab;
        }
        fp.cat = FinCat::make_equivalence(labels);
        return fp;
    }

    // Explicit: enumerate morphism tuples from each source tuple.
    std::vector<Obj> msrc, mtgt;
    std::vector<Mor> comps;
    std::vector<Mor> cm(k);
    std::vector<Obj> tt(k);
    std::vector<std::vector<std::vector<Mor>>> outs(k);
    for (std::size_t i = 0; i < k; ++i) {
        outs[i].resize(factors[i]->num_objects());
        for (Obj o = 0; o < factors[i]->num_objects(); ++o) outs[i][o] = factors[i]->out(o);
    }
    for (Obj x = 0; x < n; ++x) {
        const Obj* s = fp.tuple(x);
        std::function<void(std::size_t)> mrec = [&](std::size_t i) {
            if (i == k) {
                Obj y = fp.find(tt);
                msrc.push_back(x);
                mtgt.push_back(y);
                comps.insert(comps.end(), cm.begin(), cm.end());
                return;
            }
            for (Mor m : outs[i][s[i]]) {
                if (i > 0 && right[i - 1].map_mor(cm[i - 1]) != left[i - 1].map_mor(m)) continue;
                cm[i] = m;
                tt[i] = factors[i]->tgt(m);
                mrec(i + 1);
            }
        };
        mrec(0);
    }
    const Mor M = static_cast<Mor>(msrc.size());
    check_budget(static_cast<std::size_t>(M), "fiber product morphisms");
    std::map<std::vector<Mor>, Mor> index;
    for (Mor m = 0; m < M; ++m)
        index.emplace(std::vector<Mor>(comps.begin() + m * k, comps.begin() + (m + 1) * k), m);
    std::vector<Mor> ident(n);
    for (Obj x = 0; x < n; ++x) {
        for (std::size_t i = 0; i < k; ++i) cm[i] = factors[i]->identity(fp.tuple(x)[i]);
        ident[x] = index.at(cm);
    }
    std::vector<std::vector<Mor>> out(n);
    for (Mor m = 0; m < M; ++m) out[msrc[m]].push_back(m);
    std::vector<std::array<Mor, 3>> table;
    for (Mor f = 0; f < M; ++f)
        for (Mor g : out[mtgt[f]]) {
            for (std::size_t i = 0; i < k; ++i)
                cm[i] = factors[i]->compose(comps[g * k + i], comps[f * k + i]);
            table.push_back({g, f, index.at(cm)});
        }
    fp.cat = FinCat::make_explicit(n, msrc, mtgt, ident, table);
    fp.mor_tuples = std::move(comps);
    return fp;
}

FiberProduct pullback(const FunctorMap& f, const FunctorMap& g) {
    if (f.target->num_objects() != g.target->num_objects())
        throw InputError("pullback: mismatched targets");
    return chain_pullback({f.source, g.source}, {f}, {g});
}

// ---------------------------------------------------------------- equivalences

EquivalenceFlags equivalence_flags(const FunctorMap& f) {
    EquivalenceFlags r;
    const FinCat& A = *f.source;
    const FinCat& B = *f.target;
    {
        std::vector<char> hit(B.num_objects(), 0);
        r.injective_on_objects = true;
        for (Obj x = 0; x < A.num_objects(); ++x) {
            if (hit[f.ob[x]]) r.injective_on_objects = false;
            hit[f.ob[x]] = 1;
        }
    }
    {
        std::vector<char> hit(B.num_iso_classes(), 0);
        for (Obj x = 0; x < A.num_objects(); ++x) hit[B.iso_class(f.ob[x])] = 1;
        r.essentially_surjective = true;
        for (Obj k = 0; k < B.num_iso_classes(); ++k)
            if (!hit[k]) {
                r.essentially_surjective = false;
                if (r.witness.empty())
                    r.witness = "object " + std::to_string(B.class_members(k).front()) +
                                " of the target is not in the essential image";
                break;
            }
    }
    r.fully_faithful = true;
    if (A.mode() == FinCat::Mode::Equivalence && B.mode() == FinCat::Mode::Equivalence) {
        std::vector<Obj> seen(B.num_iso_classes(), -1);
        for (Obj k = 0; k < A.num_iso_classes(); ++k) {
            Obj t = B.iso_class(f.ob[A.class_members(k).front()]);
            if (seen[t] >= 0) {
                r.fully_faithful = false;
                r.witness = "objects " + std::to_string(A.class_members(seen[t]).front()) +
                            " and " + std::to_string(A.class_members(k).front()) +
                            " have isomorphic images but are not isomorphic";
                break;
            }
            seen[t] = k;
        }
        // Members of one class must map into one class; validity of f ensures it.
    } else {
        for (Obj x = 0; x < A.num_objects() && r.fully_faithful; ++x)
            for (Obj y = 0; y < A.num_objects() && r.fully_faithful; ++y) {
                auto hs = A.hom(x, y);
                std::size_t target_size = B.hom_size(f.ob[x], f.ob[y]);
                bool ok = hs.size() == target_size;
                if (ok && !B.is_thin()) {
                    std::set<Mor> img;
                    for (Mor m : hs) img.insert(f.map_mor(m));
                    ok = img.size() == hs.size();
                }
                if (!ok) {
                    r.fully_faithful = false;
                    r.witness = "hom(" + std::to_string(x) + "," + std::to_string(y) +
                                ") is not mapped bijectively";
                }
            }
    }
    r.is_equivalence = r.fully_faithful && r.essentially_surjective;
    return r;
}

EquivalenceFlags discretized_chain_flags(const FiberProduct& strict, const std::vector<FunctorMap>& right,
                                         const std::vector<FunctorMap>& left) {
    EquivalenceFlags r;
    const std::size_t n = strict.arity;
    r.fully_faithful = true;
    if (n <= 1) {
        r.essentially_surjective = r.injective_on_objects = r.is_equivalence = true;
        return r;
    }
    const FinCat& B = *right[0].target;
    if (!B.is_thin()) throw InputError("discretized chain: base is not thin");
    const std::uint64_t cap = std::uint64_t{1} << 62;
    auto bclass = [&](const FunctorMap& f, Obj x) { return B.iso_class(f(x)); };
    std::vector<std::uint64_t> cnt(B.num_iso_classes(), 0);
    const FinCat& F0 = *strict.factors[0];
    for (Obj c = 0; c < F0.num_iso_classes(); ++c) ++cnt[bclass(right[0], F0.class_members(c).front())];
    std::uint64_t total = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const FinCat& F = *strict.factors[i];
        std::vector<std::uint64_t> next(B.num_iso_classes(), 0);
        for (Obj c = 0; c < F.num_iso_classes(); ++c) {
            Obj x = F.class_members(c).front();
            std::uint64_t w = cnt[bclass(left[i - 1], x)];
            if (i + 1 < n) {
                auto& slot = next[bclass(right[i], x)];
                slot = std::min(cap, slot + w);
            } else {
                total = std::min(cap, total + w);
            }
        }
        cnt.swap(next);
    }
    std::set<std::vector<Obj>> realized;
    std::vector<Obj> t(n);
    for (Obj x = 0; x < strict.cat->num_objects(); ++x) {
        const Obj* tp = strict.tuple(x);
        for (std::size_t i = 0; i < n; ++i) t[i] = strict.factors[i]->iso_class(tp[i]);
        realized.insert(t);
    }
    r.essentially_surjective = realized.size() == total;
    if (!r.essentially_surjective)
        r.witness = std::to_string(total - realized.size()) + " of " + std::to_string(total) +
                    " chains of classes have no strictly composable representative";
    r.injective_on_objects = true;
    r.is_equivalence = r.essentially_surjective;
    return r;
}

BoffFactorization boff_factorize(const FunctorMap& f) {
    BoffFactorization r;
    const FinCat& A = *f.source;
    const FinCat& B = *f.target;
    const Obj n = A.num_objects();
    if (B.mode() == FinCat::Mode::Equivalence) {
        std::vector<std::int64_t> labels(n);
        for (Obj x = 0; x < n; ++x) labels[x] = B.iso_class(f.ob[x]);
        r.L = FinCat::make_equivalence(labels);
    } else {
        std::vector<Obj> src, tgt;
        std::vector<Mor> under;
        std::map<std::tuple<Obj, Obj, Mor>, Mor> index;
        std::vector<std::vector<Mor>> out(n);
        for (Obj x = 0; x < n; ++x)
            for (Obj y = 0; y < n; ++y)
                for (Mor b : B.hom(f.ob[x], f.ob[y])) {
                    Mor id = static_cast<Mor>(src.size());
                    index[{x, y, b}] = id;
                    src.push_back(x);
                    tgt.push_back(y);
                    under.push_back(b);
                    out[x].push_back(id);
                }
        check_budget(src.size(), "boff_factorize");
        std::vector<Mor> ident(n);
        for (Obj x = 0; x < n; ++x) ident[x] = index.at({x, x, B.identity(f.ob[x])});
        std::vector<std::array<Mor, 3>> table;
        for (Mor p = 0; p < static_cast<Mor>(src.size()); ++p)
            for (Mor q : out[tgt[p]])
                table.push_back({q, p, index.at({src[p], tgt[q], B.compose(under[q], under[p])})});
        r.L = FinCat::make_explicit(n, src, tgt, ident, table);
        r.g.mor = under;
    }
    r.v.source = f.source;
    r.v.target = r.L;
    r.v.ob.resize(n);
    std::iota(r.v.ob.begin(), r.v.ob.end(), 0);
    if (!r.L->is_thin()) {
        r.v.mor.resize(A.num_morphisms());
        for (Mor m = 0; m < A.num_morphisms(); ++m) {
            Mor b = f.map_mor(m);
            Obj x = A.src(m), y = A.tgt(m);
            for (Mor l : r.L->hom(x, y))
                if (r.g.mor[l] == b) r.v.mor[m] = l;
        }
    }
    r.g.source = r.L;
    r.g.target = f.target;
    r.g.ob = f.ob;
    if (B.is_thin()) r.g.mor.clear();
    return r;
}

Retraction retraction_pseudo_inverse(const FunctorMap& f) {
    auto flags = equivalence_flags(f);
    if (!flags.is_equivalence || !flags.injective_on_objects)
        throw InputError("retraction_pseudo_inverse: functor is not an injective-on-objects "
                         "equivalence");
    const FinCat& A = *f.source;
    const FinCat& B = *f.target;
    std::vector<Obj> pre(B.num_objects(), -1);
    for (Obj a = 0; a < A.num_objects(); ++a) pre[f.ob[a]] = a;
    std::vector<Obj> class_min(B.num_iso_classes(), -1);
    for (Obj a = A.num_objects() - 1; a >= 0; --a) class_min[B.iso_class(f.ob[a])] = a;

    std::vector<Obj> G(B.num_objects());
    std::vector<Mor> eps(B.num_objects());
    for (Obj b = 0; b < B.num_objects(); ++b) {
        if (pre[b] >= 0) {
            G[b] = pre[b];
            eps[b] = B.identity(b);
        } else {
            G[b] = class_min[B.iso_class(b)];
            eps[b] = min_iso(B, f.ob[G[b]], b);
        }
    }
    return retraction_with_choice(f, std::move(G), std::move(eps));
}

Retraction retraction_with_choice(const FunctorMap& f, std::vector<Obj> backward_ob,
                                  std::vector<Mor> counit) {
    const FinCat& A = *f.source;
    const FinCat& B = *f.target;
    for (Obj a = 0; a < A.num_objects(); ++a)
        if (backward_ob[f.ob[a]] != a || counit[f.ob[a]] != B.identity(f.ob[a]))
            throw std::logic_error("retraction_with_choice: G F != Id on object " + std::to_string(a));
    for (Obj b = 0; b < B.num_objects(); ++b)
        if (counit[b] < 0 || B.src(counit[b]) != f.ob[backward_ob[b]] || B.tgt(counit[b]) != b ||
            !B.is_iso(counit[b]))
            throw std::logic_error("retraction_with_choice: counit component at " + std::to_string(b) +
                                   " is not an isomorphism F G b -> b");
    Retraction r;
    r.forward = f;
    FunctorMap G;
    G.source = f.target;
    G.target = f.source;
    G.ob = std::move(backward_ob);
    if (!A.is_thin()) {
        G.mor.resize(B.num_morphisms());
        for (Mor m = 0; m < B.num_morphisms(); ++m) {
            Obj b = B.src(m), c = B.tgt(m);
            Mor want = B.compose(*B.inverse(counit[c]), B.compose(m, counit[b]));
            G.mor[m] = -1;
            for (Mor n : A.hom(G.ob[b], G.ob[c]))
                if (f.map_mor(n) == want) G.mor[m] = n;
            if (G.mor[m] < 0) throw std::logic_error("retraction_with_choice: functor is not full");
        }
    }
    r.backward = G;
    r.counit = make_nat(compose(f, G), FunctorMap::identity(f.target), std::move(counit));
    return r;
}

Subcategory full_subcategory(const CatPtr& c, const std::vector<Obj>& objects) {
    Subcategory s;
    s.index.assign(c->num_objects(), -1);
    for (std::size_t i = 0; i < objects.size(); ++i) s.index[objects[i]] = static_cast<Obj>(i);
    const Obj n = static_cast<Obj>(objects.size());
    if (c->mode() == FinCat::Mode::Equivalence) {
        std::vector<std::int64_t> labels(n);
        for (Obj i = 0; i < n; ++i) labels[i] = c->iso_class(objects[i]);
        s.cat = FinCat::make_equivalence(labels);
    } else {
        std::vector<Obj> src, tgt;
        std::vector<Mor> amb, ident(n);
        std::unordered_map<Mor, Mor> local;
        for (Obj i = 0; i < n; ++i)
            for (Mor m : c->out(objects[i])) {
                Obj j = s.index[c->tgt(m)];
                if (j < 0) continue;
                local[m] = static_cast<Mor>(src.size());
                src.push_back(i);
                tgt.push_back(j);
                amb.push_back(m);
            }
        for (Obj i = 0; i < n; ++i) ident[i] = local.at(c->identity(objects[i]));
        std::vector<std::array<Mor, 3>> table;
        std::vector<std::vector<Mor>> outs(n);
        for (Mor m = 0; m < static_cast<Mor>(src.size()); ++m) outs[src[m]].push_back(m);
        for (Mor f = 0; f < static_cast<Mor>(src.size()); ++f)
            for (Mor g : outs[tgt[f]]) table.push_back({g, f, local.at(c->compose(amb[g], amb[f]))});
        s.cat = FinCat::make_explicit(n, src, tgt, ident, table);
        s.inclusion.mor = amb;
    }
    s.inclusion.source = s.cat;
    s.inclusion.target = c;
    s.inclusion.ob = objects;
    if (c->is_thin()) s.inclusion.mor.clear();
    return s;
}

FunctorMap restrict_functor(const FunctorMap& f, const Subcategory& src, const Subcategory& tgt) {
    FunctorMap r;
    r.source = src.cat;
    r.target = tgt.cat;
    r.ob.resize(src.cat->num_objects());
    for (Obj x = 0; x < src.cat->num_objects(); ++x) {
        r.ob[x] = tgt.index[f.ob[src.inclusion.ob[x]]];
        if (r.ob[x] < 0) throw std::logic_error("restrict_functor: object leaves the target subcategory");
    }
    if (!tgt.cat->is_thin()) {
        // Target subcategory morphisms are listed by source object; search the hom-set.
        r.mor.resize(src.cat->num_morphisms());
        for (Mor m = 0; m < src.cat->num_morphisms(); ++m) {
            Mor amb = f.map_mor(src.inclusion.map_mor(m));
            r.mor[m] = -1;
            for (Mor n : tgt.cat->hom(r.ob[src.cat->src(m)], r.ob[src.cat->tgt(m)]))
                if (tgt.inclusion.map_mor(n) == amb) r.mor[m] = n;
        }
    }
    return r;
}

Coproduct coproduct(const std::vector<CatPtr>& summands) {
    Coproduct r;
    Obj n = 0;
    Mor m = 0;
    bool equiv = true;
    for (const auto& c : summands) {
        r.obj_offset.push_back(n);
        r.mor_offset.push_back(m);
        n += c->num_objects();
        m += c->num_morphisms();
        equiv = equiv && c->mode() == FinCat::Mode::Equivalence;
    }
    check_budget(static_cast<std::size_t>(n), "coproduct");
    if (equiv) {
        // Equivalence mode renumbers morphisms, so offsets are only meaningful for objects.
        std::vector<std::int64_t> labels;
        labels.reserve(n);
        std::int64_t base = 0;
        for (const auto& c : summands) {
            for (Obj x = 0; x < c->num_objects(); ++x) labels.push_back(base + c->iso_class(x));
            base += c->num_iso_classes();
        }
        r.cat = FinCat::make_equivalence(labels);
        return r;
    }
    check_budget(static_cast<std::size_t>(m), "coproduct morphisms");
    std::vector<Obj> src, tgt;
    std::vector<Mor> ident;
    std::vector<std::array<Mor, 3>> table;
    for (std::size_t i = 0; i < summands.size(); ++i) {
        const auto& c = *summands[i];
        Obj oo = r.obj_offset[i];
        Mor mo = r.mor_offset[i];
        for (Mor f = 0; f < c.num_morphisms(); ++f) {
            src.push_back(c.src(f) + oo);
            tgt.push_back(c.tgt(f) + oo);
        }
        for (Obj x = 0; x < c.num_objects(); ++x) ident.push_back(c.identity(x) + mo);
        for (auto e : c.composition_table()) table.push_back({e[0] + mo, e[1] + mo, e[2] + mo});
    }
    r.cat = FinCat::make_explicit(n, src, tgt, ident, table);
    return r;
}

// ---------------------------------------------------------------- builders

CatPtr poset_category(Obj n, const std::vector<std::pair<Obj, Obj>>& generators) {
    std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
    for (Obj i = 0; i < n; ++i) le[i][i] = 1;
    for (auto [a, b] : generators) le[a][b] = 1;
    for (Obj k = 0; k < n; ++k)
        for (Obj i = 0; i < n; ++i)
            for (Obj j = 0; j < n; ++j)
                if (le[i][k] && le[k][j]) le[i][j] = 1;
    std::vector<Obj> src, tgt;
    std::map<std::pair<Obj, Obj>, Mor> id;
    for (Obj i = 0; i < n; ++i) {
        id[{i, i}] = static_cast<Mor>(src.size());
        src.push_back(i);
        tgt.push_back(i);
    }
    for (Obj i = 0; i < n; ++i)
        for (Obj j = 0; j < n; ++j)
            if (i != j && le[i][j]) {
                id[{i, j}] = static_cast<Mor>(src.size());
                src.push_back(i);
                tgt.push_back(j);
            }
    std::vector<Mor> ident(n);
    for (Obj i = 0; i < n; ++i) ident[i] = i;
    std::vector<std::array<Mor, 3>> table;
    for (const auto& [p, f] : id)
        for (Obj k = 0; k < n; ++k)
            if (le[p.second][k]) table.push_back({id.at({p.second, k}), f, id.at({p.first, k})});
    return FinCat::make_explicit(n, src, tgt, ident, table);
}

CatPtr cyclic_group_category(Obj n) {
    std::vector<Obj> src(n, 0), tgt(n, 0);
    std::vector<std::array<Mor, 3>> table;
    for (Mor a = 0; a < n; ++a)
        for (Mor b = 0; b < n; ++b) table.push_back({a, b, (a + b) % n});
    return FinCat::make_explicit(1, src, tgt, {0}, table);
}

}  // namespace wgfair
