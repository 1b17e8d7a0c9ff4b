#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plumblat/lattice.hpp"
#include "plumblat/types.hpp"

namespace plumblat {

struct MinChiResult {
    Rat value;
    IVec argmin;                     // lex-first attaining point
    unsigned long long explored = 0; // lattice points evaluated
};

constexpr unsigned long long kEnumLimit = 200'000ULL;  // plain DFS below, bounded DFS above
constexpr Int kBoxGuard = 1'000'000'000LL;

namespace detail {

// chi(base + l) = (1/2) (l - g)^T M (l - g) + chi0 with M = -I, g = zk/2 - base
struct QuadForm {
    QVec g;
    Rat chi0;
};

inline QuadForm quad_form(const Lattice& L, const QVec& base) {
    QuadForm q;
    q.g.resize(L.n());
    QVec half(L.n());
    for (int v = 0; v < L.n(); ++v) {
        half[v] = L.zk()[v] / 2;
        q.g[v] = half[v] - base[v];
    }
    q.chi0 = L.chi(half);
    return q;
}

// Schur complements of M = -I: schur[d] is the d x d matrix with
// (1/2) p^T schur[d] p = continuous min over the free suffix given prefix p (centered)
struct SchurTable {
    std::vector<std::vector<QVec>> s;  // s[d]: d x d
};

inline std::vector<QVec> invert_spd(const Lattice& L, const std::vector<int>& idx) {
    const int m = static_cast<int>(idx.size());
    std::vector<QVec> A(m, QVec(2 * m, Rat(0)));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) A[i][j] = Rat(static_cast<long>(-L.form(idx[i], idx[j])));
        A[i][m + i] = 1;
    }
    for (int c = 0; c < m; ++c) {
        int p = -1;
        for (int r = c; r < m; ++r)
            if (A[r][c] != 0) {
                p = r;
                break;
            }
        if (p < 0) throw InternalError("singular principal submatrix");
        std::swap(A[c], A[p]);
        Rat piv = A[c][c];
        for (int k = 0; k < 2 * m; ++k) A[c][k] /= piv;
        for (int r = 0; r < m; ++r) {
            if (r == c || A[r][c] == 0) continue;
            Rat f = A[r][c];
            for (int k = 0; k < 2 * m; ++k) A[r][k] -= f * A[c][k];
        }
    }
    std::vector<QVec> inv(m, QVec(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) inv[i][j] = A[i][m + j];
    return inv;
}

inline SchurTable schur_table(const Lattice& L) {
    const int n = L.n();
    SchurTable t;
    t.s.resize(n + 1);
    for (int d = 0; d <= n; ++d) {
        std::vector<int> F;
        for (int v = d; v < n; ++v) F.push_back(v);
        std::vector<QVec> finv;
        if (!F.empty()) finv = invert_spd(L, F);
        t.s[d].assign(d, QVec(d, Rat(0)));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Rat acc(static_cast<long>(-L.form(i, j)));
                for (size_t a = 0; a < F.size(); ++a)
                    for (size_t b = 0; b < F.size(); ++b)
                        acc -= Rat(static_cast<long>(-L.form(i, F[a]))) * finv[a][b] *
                               Rat(static_cast<long>(-L.form(F[b], j)));
                t.s[d][i][j] = acc;
            }
    }
    return t;
}

struct Search {
    const Lattice& L;
    const QVec& base;
    const IVec& lo;
    const IVec& hi;
    bool exclude_zero;
    bool use_bounds;
    QuadForm qf;
    const SchurTable* schur = nullptr;

    QVec pair;   // (base + assigned prefix, E_v)
    Rat chi_cur; // chi(base + assigned prefix)
    IVec cur;
    std::optional<Rat> best;
    IVec best_arg;
    unsigned long long explored = 0;

    void run() {
        const int n = L.n();
        pair.resize(n);
        for (int v = 0; v < n; ++v) pair[v] = L.pairing_basis(base, v);
        chi_cur = L.chi(base);
        cur.assign(n, 0);
        dfs(0, true);
    }

    void dfs(int d, bool all_zero_prefix) {
        const int n = L.n();
        if (d == n) {
            if (exclude_zero && all_zero_prefix) return;
            ++explored;
            if (!best || chi_cur < *best) {
                best = chi_cur;
                best_arg = cur;
            }
            return;
        }
        // per-child bound: quadratic in t using schur[d+1] on the centered prefix
        Rat A, B, C;
        bool have_bound = false;
        if (use_bounds && best) {
            const auto& S = schur->s[d + 1];
            QVec p(d + 1);
            for (int i = 0; i < d; ++i) p[i] = Rat(static_cast<long>(cur[i])) - qf.g[i];
            A = S[d][d] / 2;
            Rat lin = 0, cst = 0;
            for (int i = 0; i < d; ++i) {
                lin += S[d][i] * p[i];
                for (int j = 0; j < d; ++j) cst += p[i] * S[i][j] * p[j];
            }
            // bound(t) = A (t-g_d)^2 + lin (t-g_d) + cst/2 + chi0
            B = lin;
            C = cst / 2 + qf.chi0;
            have_bound = true;
        }
        for (Int t = lo[d]; t <= hi[d]; ++t) {
            if (have_bound) {
                Rat td = Rat(static_cast<long>(t)) - qf.g[d];
                Rat bnd = A * td * td + B * td + C;
                if (bnd >= *best) {
                    if (2 * A * td + B >= 0) break;  // bound nondecreasing from here on
                    continue;
                }
            }
            Rat dchi = L.chi_multiple(d, Rat(static_cast<long>(t))) -
                       Rat(static_cast<long>(t)) * pair[d];
            cur[d] = t;
            chi_cur += dchi;
            if (t != 0) {
                pair[d] += Rat(static_cast<long>(t * L.euler(d)));
                for (int w : L.graph().adj[d]) pair[w] += Rat(static_cast<long>(t));
            }
            dfs(d + 1, all_zero_prefix && t == 0);
            if (t != 0) {
                pair[d] -= Rat(static_cast<long>(t * L.euler(d)));
                for (int w : L.graph().adj[d]) pair[w] -= Rat(static_cast<long>(t));
            }
            chi_cur -= dchi;
            cur[d] = 0;
        }
    }
};

}  // namespace detail

// exact min of chi(base + l) over integral lo <= l <= hi; lex-first argmin.
// exclude_zero skips the single point l = 0.
inline MinChiResult min_chi_box_general(const Lattice& L, const QVec& base, const IVec& lo,
                                        const IVec& hi, bool exclude_zero = false) {
    const int n = L.n();
    if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n)
        throw Error("box dimension mismatch");
    for (int v = 0; v < n; ++v)
        if (lo[v] > hi[v]) throw Error("empty box: lo exceeds hi at coordinate " + std::to_string(v));
    unsigned long long vol = 1;
    bool big = false;
    for (int v = 0; v < n; ++v) {
        unsigned long long w = static_cast<unsigned long long>(hi[v] - lo[v] + 1);
        if (vol > kEnumLimit / w + 1) big = true;
        vol *= w;
        if (vol > kEnumLimit) big = true;
    }
    detail::Search s{L, base, lo, hi, exclude_zero, big, detail::quad_form(L, base)};
    detail::SchurTable st;
    if (big) {
        st = detail::schur_table(L);
        s.schur = &st;
    }
    s.run();
    if (!s.best) throw Error("minimization domain is empty");
    return {*s.best, s.best_arg, s.explored};
}

inline MinChiResult min_chi_box(const Lattice& L, const QVec& base, const IVec& box) {
    return min_chi_box_general(L, base, IVec(L.n(), 0), box, false);
}

// smallest integer box B with: every l >= 0 with chi(shift + l) <= thresh lies in [0, B]
inline IVec cert_box(const Lattice& L, const QVec& shift, const Rat& thresh) {
    auto qf = detail::quad_form(L, shift);
    Rat delta = thresh - qf.chi0;
    IVec out(L.n(), 0);
    if (delta < 0) return out;  // region empty
    for (int v = 0; v < L.n(); ++v) {
        Rat r2 = 2 * L.neg_inv(v, v) * delta;
        Int b = 0;
        mpz_class gc = rat_ceil(qf.g[v]);
        if (gc > 0) b = static_cast<Int>(gc.get_si());
        while (true) {
            Rat d = Rat(static_cast<long>(b)) - qf.g[v];
            if (d > 0 && d * d > r2) break;
            if (++b > kBoxGuard) throw Error("certificate box exceeds guard");
        }
        out[v] = b;
    }
    return out;
}

struct CertifiedMin {
    MinChiResult res;
    IVec box;
};

// exact min of chi(shift + l) over all integral l >= 0 (l > 0 when positive),
// via a certified finite box
inline CertifiedMin min_chi_unbounded(const Lattice& L, const QVec& shift, bool positive) {
    Rat c0;
    bool have = false;
    if (!positive) {
        c0 = L.chi(shift);
        have = true;
    }
    for (int v = 0; v < L.n(); ++v) {
        QVec p = shift;
        p[v] += 1;
        Rat c = L.chi(p);
        if (!have || c < c0) {
            c0 = c;
            have = true;
        }
    }
    IVec box = cert_box(L, shift, c0);
    auto res = min_chi_box_general(L, shift, IVec(L.n(), 0), box, positive);
    return {res, box};
}

// min chi over l > 0; at most 1, and 1 iff the graph is rational
inline CertifiedMin min_chi_positive(const Lattice& L) {
    auto cm = min_chi_unbounded(L, QVec(L.n(), Rat(0)), true);
    if (cm.res.value > 1) throw InternalError("min chi over l > 0 exceeds chi(E_v) = 1");
    return cm;
}

enum class GraphClass { Rational, Elliptic, Other };

struct Classification {
    GraphClass kind;
    Rat min_chi;
    IVec witness;   // lex-first cycle attaining the minimum
    IVec box;       // certified search box
};

inline Classification classify(const Lattice& L) {
    auto cm = min_chi_positive(L);
    GraphClass k = GraphClass::Other;
    if (cm.res.value == 1)
        k = GraphClass::Rational;
    else if (cm.res.value == 0)
        k = GraphClass::Elliptic;
    return {k, cm.res.value, cm.res.argmin, cm.box};
}

inline const char* graph_class_name(GraphClass k) {
    switch (k) {
        case GraphClass::Rational: return "rational";
        case GraphClass::Elliptic: return "elliptic";
        default: return "other";
    }
}

inline bool numerically_gorenstein(const Lattice& L) { return is_integral(L.zk()); }

}  // namespace plumblat
