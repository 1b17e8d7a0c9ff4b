#pragma once

#include <algorithm>
#include <atomic>
#include <future>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "plumblat/generic.hpp"
#include "plumblat/laufer.hpp"
#include "plumblat/lattice.hpp"
#include "plumblat/minimize.hpp"
#include "plumblat/oracle.hpp"
#include "plumblat/types.hpp"

namespace plumblat {

// substructure: vertex subset carrying its own analytic data behind an h1 oracle
struct SubStructure {
    std::vector<int> v1;
    std::vector<char> mask;
    std::shared_ptr<H1Oracle> oracle;

    bool empty() const { return v1.empty(); }
};

inline SubStructure sub_empty(const Lattice& L) {
    return {{}, std::vector<char>(L.n(), 0), std::make_shared<ZeroOracle>()};
}

inline SubStructure sub_generic(const Lattice& L, std::vector<int> verts) {
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    if (verts.empty()) return sub_empty(L);
    auto oracle = std::make_shared<GenericRecursiveOracle>(L, verts, std::vector<int>{}, nullptr);
    return {verts, L.mask_of(verts), oracle};
}

inline void validate_tower(const Lattice& L, const std::vector<std::vector<int>>& layers) {
    if (layers.empty()) throw Error("tower must have at least one layer");
    std::set<int> seen;
    for (const auto& W : layers) {
        if (W.empty()) throw Error("tower layer must be nonempty");
        for (int v : W) {
            if (v < 0 || v >= L.n()) throw Error("tower layer vertex out of range");
            if (!seen.insert(v).second) throw Error("tower layers must be disjoint");
        }
    }
    if (static_cast<int>(seen.size()) != L.n()) throw Error("tower layers must cover every vertex");
}

// substructure carried by the first j-1 layers, with the recursively generic oracle chain
inline SubStructure sub_tower_prefix(const Lattice& L, const std::vector<std::vector<int>>& layers,
                                     int j) {
    validate_tower(L, layers);
    if (j < 1 || j > static_cast<int>(layers.size())) throw Error("tower layer index out of range");
    std::vector<int> prefix;
    std::shared_ptr<H1Oracle> oracle;
    for (int i = 0; i + 1 < j; ++i) {
        std::vector<int> sub_verts = prefix;
        for (int v : layers[i]) prefix.push_back(v);
        std::sort(prefix.begin(), prefix.end());
        oracle = std::make_shared<GenericRecursiveOracle>(L, prefix, sub_verts, oracle);
    }
    if (prefix.empty()) return sub_empty(L);
    return {prefix, L.mask_of(prefix), oracle};
}

inline SubStructure sub_table(const Lattice& L, std::vector<int> verts,
                              std::map<std::string, Int> entries) {
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    auto oracle = std::make_shared<TableOracle>(L, std::move(entries));
    return {verts, L.mask_of(verts), oracle};
}

namespace detail {

inline IVec truncate_ivec(const IVec& x, const std::vector<char>& mask) {
    IVec out(x.size(), 0);
    for (size_t v = 0; v < x.size(); ++v)
        if (mask[v]) out[v] = x[v];
    return out;
}

// min(Z - l, Z truncated to the substructure)
inline IVec oracle_cycle(const IVec& Z, const IVec& l, const std::vector<char>& mask) {
    IVec out(Z.size(), 0);
    for (size_t v = 0; v < Z.size(); ++v)
        if (mask[v]) out[v] = std::min(Z[v] - l[v], Z[v]);
    return out;
}

struct ScanOutcome {
    Rat min;
    IVec argmin;
    bool have = false;
    std::optional<IVec> first_violation;  // lex-first point with objective <= threshold
    unsigned long long count = 0;
};

inline std::atomic<unsigned long long>& scan_guard() {
    static std::atomic<unsigned long long> guard{30'000'000ULL};
    return guard;
}

// full lexicographic scan of [lo, hi] (optionally minus the zero point); objective f is
// evaluated at every point, tracking the minimum with lex-first argmin
template <typename F>
ScanOutcome scan_range(const IVec& lo, const IVec& hi, bool skip_zero, const F& f,
                       const std::optional<Rat>& viol_thresh, Int c0_from, Int c0_to) {
    ScanOutcome out;
    IVec m = lo;
    m[0] = c0_from;
    while (true) {
        if (!(skip_zero && is_zero(m))) {
            Rat val = f(m);
            ++out.count;
            if (!out.have || val < out.min) {
                out.min = val;
                out.argmin = m;
                out.have = true;
            }
            if (viol_thresh && !out.first_violation && val <= *viol_thresh)
                out.first_violation = m;
        }
        int d = static_cast<int>(m.size()) - 1;
        while (d > 0 && m[d] == hi[d]) {
            m[d] = lo[d];
            --d;
        }
        if (d == 0) {
            if (m[0] == c0_to) break;
            ++m[0];
        } else {
            ++m[d];
        }
    }
    return out;
}

template <typename F>
ScanOutcome scan_box(const IVec& lo, const IVec& hi, bool skip_zero, const F& f,
                     const std::optional<Rat>& viol_thresh, bool parallel) {
    unsigned long long guard = scan_guard().load();
    unsigned long long vol = 1;
    for (size_t v = 0; v < lo.size(); ++v) {
        if (lo[v] > hi[v]) throw Error("empty scan box");
        vol *= static_cast<unsigned long long>(hi[v] - lo[v] + 1);
        if (vol > guard)
            throw Error("scan box exceeds guard (" + std::to_string(guard) + " points)");
    }
    unsigned int hw = std::thread::hardware_concurrency();
    unsigned int threads = std::min<unsigned int>(std::max(hw, 2u), 8);
    Int span = hi[0] - lo[0] + 1;
    if (!parallel || span < 2) {
        return scan_range(lo, hi, skip_zero, f, viol_thresh, lo[0], hi[0]);
    }
    Int chunk = (span + threads - 1) / threads;
    std::vector<std::future<ScanOutcome>> futs;
    for (Int a = lo[0]; a <= hi[0]; a += chunk) {
        Int b = std::min(hi[0], a + chunk - 1);
        futs.push_back(std::async(std::launch::async, [&, a, b] {
            return scan_range(lo, hi, skip_zero, f, viol_thresh, a, b);
        }));
    }
    ScanOutcome out;
    for (auto& fu : futs) {
        ScanOutcome part = fu.get();
        out.count += part.count;
        if (part.have && (!out.have || part.min < out.min)) {
            out.min = part.min;
            out.argmin = part.argmin;
            out.have = true;
        }
        if (!out.first_violation && part.first_violation) out.first_violation = part.first_violation;
    }
    return out;
}

}  // namespace detail

struct DominanceReport {
    bool dominant = false;
    std::optional<IVec> witness;  // lex-first violating cycle when not dominant
    Rat margin;                   // min over the scanned cycles of RHS - LHS
    unsigned long long checked = 0;
};

// dominance of the pair (Z, l') relative to the substructure:
// chi(-l') - oracle(Z_1, l') < chi(-l'+l) - oracle(min(Z-l, Z_1), l'-l) for all 0 < l <= Z
inline DominanceReport relative_dominant(const Lattice& L, const IVec& Z, const QVec& lp,
                                         const SubStructure& sub, bool parallel = false) {
    check_effective_cycle(L, Z);
    QVec neg(L.n());
    for (int v = 0; v < L.n(); ++v) neg[v] = -lp[v];
    IVec Z1 = detail::truncate_ivec(Z, sub.mask);
    Rat lhs = L.chi(neg) - Rat(static_cast<long>(sub.oracle->evaluate(Z1, lp)));

    if (sub.empty()) {
        // slack(l) = chi(-l'+l) - chi(-l')
        auto r = min_chi_box_general(L, neg, IVec(L.n(), 0), Z, true);
        Rat margin = r.value - lhs;
        DominanceReport rep{margin > 0, std::nullopt, margin, r.explored};
        if (!rep.dominant) {
            // lex-first violator, found by bounded lex DFS
            auto first = detail::scan_box(IVec(L.n(), 0), Z, true,
                                          [&](const IVec& l) {
                                              QVec x = neg;
                                              for (int v = 0; v < L.n(); ++v) x[v] += static_cast<long>(l[v]);
                                              return L.chi(x);
                                          },
                                          lhs, false)
                             .first_violation;
            rep.witness = first;
        }
        return rep;
    }

    auto obj = [&](const IVec& l) -> Rat {
        QVec x = neg;
        for (int v = 0; v < L.n(); ++v) x[v] += static_cast<long>(l[v]);
        QVec tw(L.n());
        for (int v = 0; v < L.n(); ++v) tw[v] = lp[v] - static_cast<long>(l[v]);
        return L.chi(x) -
               Rat(static_cast<long>(sub.oracle->evaluate(detail::oracle_cycle(Z, l, sub.mask), tw)));
    };
    auto sc = detail::scan_box(IVec(L.n(), 0), Z, true, obj, lhs, parallel);
    DominanceReport rep;
    rep.margin = sc.min - lhs;
    rep.dominant = rep.margin > 0;
    rep.witness = sc.first_violation;
    rep.checked = sc.count;
    return rep;
}

struct RelH1 {
    Int h1 = 0;
    IVec argmin;
    unsigned long long checked = 0;
};

// h1 of a generic line bundle of Chern class l' on Z relative to the substructure:
// chi(-l') - min_{0 <= l <= Z} [ chi(-l'+l) - oracle(min(Z-l, Z_1), l'-l) ]
inline RelH1 h1_relative_bundle(const Lattice& L, const IVec& Z, const QVec& lp,
                                const SubStructure& sub, bool parallel = false) {
    check_effective_cycle(L, Z);
    if (!L.in_dual_lattice(lp)) throw Error("Chern class is not in the dual lattice");
    QVec neg(L.n());
    for (int v = 0; v < L.n(); ++v) neg[v] = -lp[v];
    if (sub.empty()) {
        auto r = min_chi_box(L, neg, Z);
        return {rat_to_int(L.chi(neg) - r.value, "relative h1"), r.argmin, r.explored};
    }
    auto obj = [&](const IVec& l) -> Rat {
        QVec x = neg;
        for (int v = 0; v < L.n(); ++v) x[v] += static_cast<long>(l[v]);
        QVec tw(L.n());
        for (int v = 0; v < L.n(); ++v) tw[v] = lp[v] - static_cast<long>(l[v]);
        return L.chi(x) -
               Rat(static_cast<long>(sub.oracle->evaluate(detail::oracle_cycle(Z, l, sub.mask), tw)));
    };
    auto sc = detail::scan_box(IVec(L.n(), 0), Z, false, obj, std::nullopt, parallel);
    return {rat_to_int(L.chi(neg) - sc.min, "relative h1"), sc.argmin, sc.count};
}

struct RelH0 {
    Int h0 = 0;
    Int h1 = 0;
    Int chi = 0;
    IVec argmax;
};

// h0 as the max of chi_sheaf(Z-l, l'-l) + oracle(min(Z-l, Z_1), l'-l); identical to
// chi_sheaf(Z, l') + h1 pointwise, both are computed and must agree
inline RelH0 h0_relative_bundle(const Lattice& L, const IVec& Z, const QVec& lp,
                                const SubStructure& sub, bool parallel = false) {
    auto h1 = h1_relative_bundle(L, Z, lp, sub, parallel);
    Int cs = chi_sheaf(L, Z, lp);
    RelH0 out{cs + h1.h1, h1.h1, cs, h1.argmin};
    if (out.h0 < 0 && chern_realizable(L, lp))
        throw InternalError("negative relative h0 for a realizable class");
    return out;
}

// h1 of the structure sheaf of Z relative to the substructure, blockwise over
// the support components of Z
inline Int h1_oz_relgen(const Lattice& L, const IVec& Z, const SubStructure& sub,
                        bool parallel = false) {
    check_effective_cycle(L, Z);
    if (sub.empty()) return h1_generic_cycle(L, Z);
    Int total = 0;
    for (const auto& comp : L.support_components(Z)) {
        IVec zc(L.n(), 0), lo(L.n(), 0);
        for (int v : comp) {
            zc[v] = Z[v];
            lo[v] = 1;
        }
        auto obj = [&](const IVec& l) -> Rat {
            QVec tw(L.n());
            for (int v = 0; v < L.n(); ++v) tw[v] = Rat(static_cast<long>(-l[v]));
            return L.chi(l) -
                   Rat(static_cast<long>(
                       sub.oracle->evaluate(detail::oracle_cycle(zc, l, sub.mask), tw)));
        };
        auto sc = detail::scan_box(lo, zc, false, obj, std::nullopt, parallel);
        total += 1 - rat_to_int(sc.min, "structure sheaf min");
    }
    return total;
}

namespace detail {

inline IVec box_max(IVec a, const IVec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = std::max(a[i], b[i]);
    return a;
}

inline IVec box_scale(IVec a, Int k) {
    for (auto& x : a) x *= k;
    return a;
}

// germ-level dominance for Chern class c: certified scan box from the quadratic bound,
// re-verified at the doubled box when an oracle is involved
inline DominanceReport germ_dominant(const Lattice& L, const QVec& c, const SubStructure& sub,
                                     bool parallel) {
    QVec shift(L.n());
    for (int v = 0; v < L.n(); ++v) shift[v] = -c[v];
    IVec B = box_max(cert_box(L, shift, L.chi(shift)), IVec(L.n(), 1));
    auto rep = relative_dominant(L, box_scale(B, 2), c, sub, parallel);
    if (!sub.empty()) {
        auto rep2 = relative_dominant(L, box_scale(B, 4), c, sub, parallel);
        if (rep2.dominant != rep.dominant)
            throw InternalError("germ dominance did not stabilize under box doubling");
    }
    return rep;
}

}  // namespace detail

struct PgResult {
    Int pg = 0;
    IVec box;
};

// geometric genus relative to the substructure: stabilized h1 of O_Z over the germ
inline PgResult pg_relgen(const Lattice& L, const SubStructure& sub, bool parallel = false) {
    if (sub.empty()) {
        auto cm = min_chi_positive(L);
        return {1 - rat_to_int(cm.res.value, "min chi"), cm.box};
    }
    IVec B = detail::box_max(cert_box(L, QVec(L.n(), Rat(0)), Rat(1)), IVec(L.n(), 1));
    Int v1 = h1_oz_relgen(L, B, sub, parallel);
    Int v2 = h1_oz_relgen(L, detail::box_scale(B, 2), sub, parallel);
    if (v1 != v2) throw InternalError("relative geometric genus did not stabilize");
    return {v1, B};
}

struct MemberResult {
    bool member = false;
    std::string reason;
    std::optional<DominanceReport> dominance;
    IVec box;
};

// membership of l' in the analytic semigroup of the pair (graph, substructure)
inline MemberResult san_member(const Lattice& L, const QVec& lp, const SubStructure& sub,
                               bool parallel = false) {
    if (!L.in_dual_lattice(lp)) throw Error("membership requires a class in the dual lattice");
    if (is_zero(lp)) return {true, "zero class", std::nullopt, {}};
    if (!L.lipman_contains(lp)) return {false, "outside the Lipman cone", std::nullopt, {}};
    QVec c(L.n());
    for (int v = 0; v < L.n(); ++v) c[v] = -lp[v];
    IVec B = detail::box_max(cert_box(L, lp, L.chi(lp)), IVec(L.n(), 1));
    auto rep = detail::germ_dominant(L, c, sub, parallel);
    return {rep.dominant, rep.dominant ? "dominant" : "dominance fails", rep, B};
}

struct NaturalH1 {
    Int h1 = 0;
    bool effective_branch = false;  // l' integral effective: the D correction applies
    Int d_value = 0;
    IVec box;
    IVec argmin;
};

// h1 of the natural line bundle of Chern class l' on the germ
inline NaturalH1 h1_natural(const Lattice& L, const QVec& lp, const SubStructure& sub,
                            bool parallel = false) {
    if (!L.in_dual_lattice(lp)) throw Error("natural classes live in the dual lattice");
    QVec neg(L.n());
    for (int v = 0; v < L.n(); ++v) neg[v] = -lp[v];
    bool inL = is_integral(lp);
    bool effective = true;
    for (int v = 0; v < L.n(); ++v)
        if (lp[v] < 0) effective = false;

    IVec B = detail::box_max(cert_box(L, neg, L.chi(neg)), IVec(L.n(), 1));
    if (inL && effective) {
        IVec lpi = to_ivec(lp);
        B = detail::box_max(B, lpi);
    }
    auto sat = laufer_saturate(L, neg);
    IVec satpt(L.n());
    for (int v = 0; v < L.n(); ++v)
        satpt[v] = static_cast<Int>(rat_ceil(sat.terminal[v] + lp[v]).get_si());
    B = detail::box_max(B, satpt);

    auto value_at = [&](const IVec& box) -> std::pair<Int, IVec> {
        if (sub.empty()) {
            auto r = min_chi_box(L, neg, box);
            return {rat_to_int(L.chi(neg) - r.value, "natural h1"), r.argmin};
        }
        IVec Z = detail::box_scale(box, 2);
        IVec Z1 = detail::truncate_ivec(Z, sub.mask);
        auto obj = [&](const IVec& l) -> Rat {
            QVec x = neg;
            for (int v = 0; v < L.n(); ++v) x[v] += static_cast<long>(l[v]);
            QVec tw(L.n());
            for (int v = 0; v < L.n(); ++v) tw[v] = lp[v] - static_cast<long>(l[v]);
            return L.chi(x) -
                   Rat(static_cast<long>(
                       sub.oracle->evaluate(detail::oracle_cycle(Z, l, sub.mask), tw)));
        };
        auto sc = detail::scan_box(IVec(L.n(), 0), box, false, obj, std::nullopt, parallel);
        return {rat_to_int(L.chi(neg) - sc.min, "natural h1"), sc.argmin};
    };

    auto [val, arg] = value_at(B);
    if (!sub.empty()) {
        auto [val2, arg2] = value_at(detail::box_scale(B, 2));
        (void)arg2;
        if (val2 != val) throw InternalError("natural h1 did not stabilize under box doubling");
    }
    NaturalH1 out{val, false, 0, B, arg};
    if (inL && effective) {
        out.effective_branch = true;
        auto dom = detail::germ_dominant(L, QVec(L.n(), Rat(0)), sub, parallel);
        out.d_value = dom.dominant ? 0 : 1;
        out.h1 += out.d_value;
    }
    return out;
}

struct RelRational {
    bool rational = false;
    std::optional<IVec> witness;
    Rat margin;
    unsigned long long checked = 0;
};

// relative rationality on Z: -oracle(Z_1, 0) < chi(l) - oracle(min(Z-l, Z_1), -l) for 0 < l <= Z
inline RelRational relatively_rational(const Lattice& L, const IVec& Z, const SubStructure& sub,
                                       bool parallel = false) {
    auto rep = relative_dominant(L, Z, QVec(L.n(), Rat(0)), sub, parallel);
    return {rep.dominant, rep.witness, rep.margin, rep.checked};
}

struct EcaDims {
    Int eca = 0;      // (l', Z)
    Int eca_rel = 0;  // oracle(Z_1, l') - oracle(Z_1, 0) + (l', Z)
    Int fiber = 0;    // (l', Z) + h1(Z, l') - h1(O_Z)
};

inline EcaDims eca_dims(const Lattice& L, const IVec& Z, const QVec& lp, const SubStructure& sub,
                        bool parallel = false) {
    check_effective_cycle(L, Z);
    Int eca = rat_to_int(L.pairing(lp, to_qvec(Z)), "effective Cartier pairing");
    IVec Z1 = detail::truncate_ivec(Z, sub.mask);
    Int rel = sub.oracle->evaluate(Z1, lp) - sub.oracle->evaluate(Z1, QVec(L.n(), Rat(0))) + eca;
    Int h1 = h1_relative_bundle(L, Z, lp, sub, parallel).h1;
    Int h1oz = h1_oz_relgen(L, Z, sub, parallel);
    return {eca, rel, eca + h1 - h1oz};
}

struct EllipticEntry {
    int N = 0;
    bool dominant = false;
    Rat margin;
};

struct EllipticCheck {
    std::vector<EllipticEntry> table;
    bool implication_holds = false;  // dominant(N) implies dominant(1)
};

inline EllipticCheck elliptic_dominance_check(const Lattice& L, int v, int nmax,
                                              const SubStructure& sub, bool parallel = false) {
    if (v < 0 || v >= L.n()) throw Error("vertex index out of range");
    if (sub.mask[v]) throw Error("test vertex must lie outside the substructure");
    auto mc = min_chi_positive(L);
    if (mc.res.value < 0)
        throw Error("requires min chi >= 0 over positive cycles (rational or elliptic)");
    if (nmax < 1) throw Error("need at least one multiple");
    QVec estar = L.dual_basis(v);
    EllipticCheck out;
    for (int N = 1; N <= nmax; ++N) {
        QVec c(L.n());
        for (int w = 0; w < L.n(); ++w) c[w] = -Rat(static_cast<long>(N)) * estar[w];
        auto rep = detail::germ_dominant(L, c, sub, parallel);
        out.table.push_back({N, rep.dominant, rep.margin});
    }
    bool dom1 = out.table.front().dominant;
    out.implication_holds = true;
    for (const auto& e : out.table)
        if (e.dominant && !dom1) out.implication_holds = false;
    return out;
}

struct RelgenResult {
    Int h1 = 0;
    IVec argmin;
    bool h0reg_nonempty = false;
    DominanceReport dominance;
    bool coefficients_positive = false;  // a_v > 0 on W_j meeting |Z|
    std::vector<int> nonpositive;        // vertices where a_v < 0 (a_v = 0 is an error)
    unsigned long long substitutions = 0;
};

// natural line bundle on Z along a tower, relative to the first j-1 layers
inline RelgenResult relgen_natural(const Lattice& L, const IVec& Z, const QVec& lp,
                                   const std::vector<std::vector<int>>& layers, int j,
                                   bool parallel = false) {
    validate_tower(L, layers);
    if (j < 1 || j > static_cast<int>(layers.size())) throw Error("tower layer index out of range");
    if (!L.in_dual_lattice(lp)) throw Error("natural classes live in the dual lattice");
    check_effective_cycle(L, Z);

    // l' = -sum a_v E*_v; a_v = (l', E_v) must be nonzero (positive for the sharp form)
    // on the active layer inside the support of Z
    std::vector<int> zeros, negatives;
    for (int v : layers[j - 1]) {
        if (Z[v] == 0) continue;
        Rat a = L.pairing_basis(lp, v);
        if (a == 0) zeros.push_back(v);
        else if (a < 0) negatives.push_back(v);
    }
    if (!zeros.empty()) {
        std::string msg = "hypothesis not satisfied: coefficient a = 0 at";
        for (int v : zeros) msg += " '" + L.graph().vertices[v].id + "'";
        throw Error(msg);
    }

    SubStructure sub = sub_tower_prefix(L, layers, j);
    auto h1 = h1_relative_bundle(L, Z, lp, sub, parallel);
    auto dom = relative_dominant(L, Z, lp, sub, parallel);
    RelgenResult out;
    out.h1 = h1.h1;
    out.argmin = h1.argmin;
    out.h0reg_nonempty = dom.dominant;
    out.dominance = dom;
    out.coefficients_positive = negatives.empty();
    out.nonpositive = negatives;
    out.substitutions = sub.oracle->substitutions();
    return out;
}

}  // namespace plumblat
