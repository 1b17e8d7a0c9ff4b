#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "plumblat/lattice.hpp"
#include "plumblat/types.hpp"

// literal, unoptimized evaluations of the same quantities the main headers compute.
// every minimum is a full box enumeration and every recursion re-evaluates its
// subexpressions, so results are independent of the memoized fast paths.
namespace plumblat::brute {

struct Budget {
    unsigned long long used = 0;
    unsigned long long limit = 100'000'000ULL;

    void spend(unsigned long long k = 1) {
        used += k;
        if (used > limit) throw Error("brute-force budget exceeded");
    }
};

// lexicographic iteration over [lo, hi]; returns false when exhausted
inline bool next_point(IVec& m, const IVec& lo, const IVec& hi) {
    int d = static_cast<int>(m.size()) - 1;
    while (d >= 0 && m[d] == hi[d]) {
        m[d] = lo[d];
        --d;
    }
    if (d < 0) return false;
    ++m[d];
    return true;
}

struct BruteMin {
    Rat value;
    IVec argmin;
    bool have = false;
};

template <typename F>
BruteMin minimize_box(const IVec& lo, const IVec& hi, bool exclude_zero, const F& f, Budget& b) {
    for (size_t v = 0; v < lo.size(); ++v)
        if (lo[v] > hi[v]) throw Error("empty brute box");
    BruteMin out;
    IVec m = lo;
    do {
        if (exclude_zero && is_zero(m)) continue;
        b.spend();
        Rat val = f(m);
        if (!out.have || val < out.value) {
            out.value = val;
            out.argmin = m;
            out.have = true;
        }
    } while (next_point(m, lo, hi));
    return out;
}

inline BruteMin min_chi(const Lattice& L, const QVec& base, const IVec& lo, const IVec& hi,
                        bool exclude_zero, Budget& b) {
    return minimize_box(lo, hi, exclude_zero,
                        [&](const IVec& l) {
                            QVec x = base;
                            for (int v = 0; v < L.n(); ++v) x[v] += static_cast<long>(l[v]);
                            return L.chi(x);
                        },
                        b);
}

// tower prefix as a plain chain of vertex sets, deepest last
struct NestedSpec {
    std::vector<int> verts;
    std::shared_ptr<const NestedSpec> sub;
};

inline std::shared_ptr<const NestedSpec> nested_prefix(const std::vector<std::vector<int>>& layers,
                                                       int j) {
    std::shared_ptr<const NestedSpec> chain;
    std::vector<int> acc;
    for (int i = 0; i + 1 < j; ++i) {
        for (int v : layers[i]) acc.push_back(v);
        auto node = std::make_shared<NestedSpec>();
        node->verts = acc;
        std::sort(node->verts.begin(), node->verts.end());
        node->sub = chain;
        chain = node;
    }
    return chain;
}

inline IVec restrict_to(const IVec& x, const std::vector<char>& mask) {
    IVec out(x.size(), 0);
    for (size_t v = 0; v < x.size(); ++v)
        if (mask[v]) out[v] = x[v];
    return out;
}

inline Int rat_to_int_brute(const Rat& x) {
    if (x.get_den() != 1) throw InternalError("brute value is not an integer");
    return static_cast<Int>(x.get_num().get_si());
}

// h1 of the generic bundle of twist t on the cycle A living on spec->verts,
// recursively relative to spec->sub; literal formula, no memoization
inline Int nested_eval(const Lattice& L, const NestedSpec* spec, const IVec& A, const QVec& t,
                       Budget& b) {
    if (spec == nullptr) return 0;
    std::vector<char> mask = L.mask_of(spec->verts);
    std::vector<char> sub_mask =
        spec->sub ? L.mask_of(spec->sub->verts) : std::vector<char>(L.n(), 0);
    for (int v = 0; v < L.n(); ++v) {
        if (A[v] < 0) throw Error("brute oracle cycle must be effective");
        if (A[v] > 0 && !mask[v]) throw Error("brute oracle cycle not supported in its subset");
    }
    if (is_zero(A)) return 0;

    auto sub_cycle = [&](const IVec& m) {
        IVec out(L.n(), 0);
        for (int v = 0; v < L.n(); ++v)
            if (sub_mask[v]) out[v] = std::min(A[v] - m[v], A[v]);
        return out;
    };

    if (is_zero(t)) {
        Int total = 0;
        for (const auto& comp : L.support_components(A)) {
            IVec ac(L.n(), 0), lo(L.n(), 0);
            for (int v : comp) {
                ac[v] = A[v];
                lo[v] = 1;
            }
            auto r = minimize_box(lo, ac, false,
                                  [&](const IVec& m) -> Rat {
                                      IVec rest(L.n(), 0);
                                      for (int v = 0; v < L.n(); ++v)
                                          if (sub_mask[v]) rest[v] = std::min(ac[v] - m[v], ac[v]);
                                      QVec tw(L.n());
                                      for (int v = 0; v < L.n(); ++v)
                                          tw[v] = Rat(static_cast<long>(-m[v]));
                                      return L.chi(m) -
                                             Rat(static_cast<long>(
                                                 nested_eval(L, spec->sub.get(), rest, tw, b)));
                                  },
                                  b);
            total += 1 - rat_to_int_brute(r.value);
        }
        return total;
    }

    auto r = minimize_box(IVec(L.n(), 0), A, false,
                          [&](const IVec& m) -> Rat {
                              QVec tw(L.n());
                              for (int v = 0; v < L.n(); ++v) tw[v] = t[v] - static_cast<long>(m[v]);
                              return L.chi(m) + L.pairing(t, to_qvec(m)) -
                                     Rat(static_cast<long>(
                                         nested_eval(L, spec->sub.get(), sub_cycle(m), tw, b)));
                          },
                          b);
    return -rat_to_int_brute(r.value);
}

struct BruteRel {
    Int h1 = 0;
    IVec argmin;
    bool dominant = false;
    Rat margin;
};

// relative generic h1 and dominance on Z with Chern class l', literal scans
inline BruteRel relative(const Lattice& L, const IVec& Z, const QVec& lp, const NestedSpec* spec,
                         Budget& b) {
    std::vector<char> mask = spec ? L.mask_of(spec->verts) : std::vector<char>(L.n(), 0);
    QVec neg(L.n());
    for (int v = 0; v < L.n(); ++v) neg[v] = -lp[v];
    IVec Z1 = restrict_to(Z, mask);
    Rat lhs = L.chi(neg) - Rat(static_cast<long>(nested_eval(L, spec, Z1, lp, b)));

    auto rhs = [&](const IVec& l) -> Rat {
        QVec x = neg;
        for (int v = 0; v < L.n(); ++v) x[v] += static_cast<long>(l[v]);
        IVec cyc(L.n(), 0);
        for (int v = 0; v < L.n(); ++v)
            if (mask[v]) cyc[v] = std::min(Z[v] - l[v], Z[v]);
        QVec tw(L.n());
        for (int v = 0; v < L.n(); ++v) tw[v] = lp[v] - static_cast<long>(l[v]);
        return L.chi(x) - Rat(static_cast<long>(nested_eval(L, spec, cyc, tw, b)));
    };

    auto full = minimize_box(IVec(L.n(), 0), Z, false, rhs, b);
    auto pos = minimize_box(IVec(L.n(), 0), Z, true, rhs, b);
    BruteRel out;
    out.h1 = rat_to_int_brute(L.chi(neg) - full.value);
    out.argmin = full.argmin;
    out.margin = pos.value - lhs;
    out.dominant = out.margin > 0;
    return out;
}

}  // namespace plumblat::brute
