#pragma once

#include <memory>
#include <string>
#include <vector>

#include "plumblat/graph.hpp"
#include "plumblat/types.hpp"

namespace plumblat {

// Intersection lattice of a plumbing graph. All linear algebra is exact.
// M = -I is positive definite; minors[k] are the leading principal minors of M.
class Lattice {
public:
    explicit Lattice(const Graph& g) : graph_(g) {
        const int n = g.n();
        form_.assign(n, IVec(n, 0));
        for (int v = 0; v < n; ++v) form_[v][v] = g.vertices[v].euler;
        for (auto [a, b] : g.edges) {
            form_[a][b] = 1;
            form_[b][a] = 1;
        }
        compute_minors_and_det();
        compute_inverse();
        compute_zk();
    }

    const Graph& graph() const { return graph_; }
    int n() const { return graph_.n(); }
    Int euler(int v) const { return form_[v][v]; }
    Int form(int v, int w) const { return form_[v][w]; }
    const mpz_class& detH() const { return detH_; }
    const std::vector<mpz_class>& minors() const { return minors_; }
    const QVec& zk() const { return zk_; }

    // (x, y) under the intersection form
    Rat pairing(const QVec& x, const QVec& y) const {
        Rat t = 0;
        for (int v = 0; v < n(); ++v) t += x[v] * Rat(static_cast<long>(form_[v][v])) * y[v];
        for (auto [a, b] : graph_.edges) t += x[a] * y[b] + x[b] * y[a];
        return t;
    }

    // (x, E_v)
    Rat pairing_basis(const QVec& x, int v) const {
        Rat t = x[v] * Rat(static_cast<long>(form_[v][v]));
        for (int w : graph_.adj[v]) t += x[w];
        return t;
    }

    // chi(x) = -(x, x - Z_K)/2
    Rat chi(const QVec& x) const {
        QVec d(n());
        for (int v = 0; v < n(); ++v) d[v] = x[v] - zk_[v];
        return -pairing(x, d) / 2;
    }

    Rat chi(const IVec& x) const { return chi(to_qvec(x)); }

    // chi of a single multiple t*E_v
    Rat chi_multiple(int v, const Rat& t) const {
        Rat e(static_cast<long>(form_[v][v]));
        return (-t * t * e + t * (e + 2)) / 2;
    }

    // E*_v: the dual class with (E*_v, E_w) = -delta_vw; column v of (-I)^{-1}
    QVec dual_basis(int v) const {
        QVec out(n());
        for (int w = 0; w < n(); ++w) out[w] = neg_inv_[w][v];
        return out;
    }

    Rat neg_inv(int v, int w) const { return neg_inv_[v][w]; }

    // componentwise fractional part; the representative of l' mod L in [0,1)^V
    QVec class_rep(const QVec& lp) const {
        QVec out(n());
        for (int v = 0; v < n(); ++v) out[v] = lp[v] - Rat(rat_floor(lp[v]));
        return out;
    }

    // l' in L' iff every (l', E_v) is an integer
    bool in_dual_lattice(const QVec& lp) const {
        for (int v = 0; v < n(); ++v)
            if (pairing_basis(lp, v).get_den() != 1) return false;
        return true;
    }

    // E*-coordinates a_v = -(l', E_v); defined exactly on L'
    IVec estar_coords(const QVec& lp) const {
        IVec out(n());
        for (int v = 0; v < n(); ++v) {
            Rat p = -pairing_basis(lp, v);
            if (p.get_den() != 1) throw Error("class is not in the dual lattice");
            out[v] = static_cast<Int>(p.get_num().get_si());
        }
        return out;
    }

    QVec from_estar_coords(const IVec& a) const {
        QVec out(n(), Rat(0));
        for (int v = 0; v < n(); ++v)
            if (a[v] != 0)
                for (int w = 0; w < n(); ++w) out[w] += Rat(static_cast<long>(a[v])) * neg_inv_[w][v];
        return out;
    }

    // Lipman cone S': (l', E_v) <= 0 for all v
    bool lipman_contains(const QVec& lp) const {
        for (int v = 0; v < n(); ++v)
            if (pairing_basis(lp, v) > 0) return false;
        return true;
    }

    std::vector<int> support(const IVec& x) const {
        std::vector<int> out;
        for (int v = 0; v < n(); ++v)
            if (x[v] != 0) out.push_back(v);
        return out;
    }

    // connected components of {v : x_v > 0} in the graph
    std::vector<std::vector<int>> support_components(const IVec& x) const {
        std::vector<char> in(n(), 0), seen(n(), 0);
        for (int v = 0; v < n(); ++v) in[v] = x[v] > 0;
        std::vector<std::vector<int>> comps;
        for (int s = 0; s < n(); ++s) {
            if (!in[s] || seen[s]) continue;
            std::vector<int> comp, stack{s};
            seen[s] = 1;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                comp.push_back(u);
                for (int w : graph_.adj[u])
                    if (in[w] && !seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
            }
            comps.push_back(comp);
        }
        return comps;
    }

    // zero out coordinates outside `keep`
    template <typename Vec>
    Vec truncate(const Vec& x, const std::vector<char>& keep) const {
        Vec out = x;
        for (int v = 0; v < n(); ++v)
            if (!keep[v]) out[v] = typename Vec::value_type(0);
        return out;
    }

    std::vector<char> mask_of(const std::vector<int>& verts) const {
        std::vector<char> m(n(), 0);
        for (int v : verts) m[v] = 1;
        return m;
    }

private:
    void compute_minors_and_det() {
        // fraction-free Bareiss on M = -I; pivots give the leading principal minors
        const int n = graph_.n();
        std::vector<std::vector<mpz_class>> M(n, std::vector<mpz_class>(n));
        for (int v = 0; v < n; ++v)
            for (int w = 0; w < n; ++w) M[v][w] = static_cast<long>(-form_[v][w]);
        minors_.assign(n, 0);
        mpz_class prev = 1;
        for (int k = 0; k < n; ++k) {
            if (M[k][k] == 0)
                throw Error("intersection form is not negative definite (zero leading minor " +
                            std::to_string(k + 1) + ")");
            for (int i = k + 1; i < n; ++i)
                for (int j = k + 1; j < n; ++j)
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
            minors_[k] = M[k][k];
            if (minors_[k] <= 0)
                throw Error("intersection form is not negative definite (leading minor " +
                            std::to_string(k + 1) + " = " + minors_[k].get_str() + ")");
            prev = M[k][k];
        }
        detH_ = minors_[n - 1];
    }

    void compute_inverse() {
        // Gauss-Jordan on M = -I over Q
        const int n = graph_.n();
        std::vector<QVec> A(n, QVec(2 * n, Rat(0)));
        for (int v = 0; v < n; ++v) {
            for (int w = 0; w < n; ++w) A[v][w] = Rat(static_cast<long>(-form_[v][w]));
            A[v][n + v] = 1;
        }
        for (int c = 0; c < n; ++c) {
            int p = -1;
            for (int r = c; r < n; ++r)
                if (A[r][c] != 0) {
                    p = r;
                    break;
                }
            if (p < 0) throw Error("singular intersection form");
            std::swap(A[c], A[p]);
            Rat piv = A[c][c];
            for (int k = 0; k < 2 * n; ++k) A[c][k] /= piv;
            for (int r = 0; r < n; ++r) {
                if (r == c || A[r][c] == 0) continue;
                Rat f = A[r][c];
                for (int k = 0; k < 2 * n; ++k) A[r][k] -= f * A[c][k];
            }
        }
        neg_inv_.assign(n, QVec(n));
        for (int v = 0; v < n; ++v)
            for (int w = 0; w < n; ++w) neg_inv_[v][w] = A[v][n + w];
    }

    void compute_zk() {
        // (Z_K, E_v) = e_v + 2, i.e. I z = b with b_v = e_v + 2; z = -(-I)^{-1} b
        const int n = graph_.n();
        zk_.assign(n, Rat(0));
        for (int v = 0; v < n; ++v) {
            Rat acc = 0;
            for (int w = 0; w < n; ++w)
                acc += neg_inv_[v][w] * Rat(static_cast<long>(form_[w][w] + 2));
            zk_[v] = -acc;
        }
    }

    Graph graph_;
    std::vector<IVec> form_;
    std::vector<mpz_class> minors_;
    mpz_class detH_;
    std::vector<QVec> neg_inv_;
    QVec zk_;
};

// induced sublattice on a vertex subset, with the index correspondence
struct Sublattice {
    std::vector<int> verts;              // ambient indices, file order
    std::vector<int> ambient_to_sub;     // -1 off the subset
    std::unique_ptr<Lattice> lattice;    // null when the subset is empty
};

inline Sublattice make_sublattice(const Lattice& L, const std::vector<int>& verts_in) {
    Sublattice s;
    s.verts = verts_in;
    std::sort(s.verts.begin(), s.verts.end());
    s.verts.erase(std::unique(s.verts.begin(), s.verts.end()), s.verts.end());
    s.ambient_to_sub.assign(L.n(), -1);
    for (size_t i = 0; i < s.verts.size(); ++i) s.ambient_to_sub[s.verts[i]] = static_cast<int>(i);
    if (s.verts.empty()) return s;
    Graph g;
    for (int v : s.verts) g.vertices.push_back(L.graph().vertices[v]);
    for (auto [a, b] : L.graph().edges) {
        int sa = s.ambient_to_sub[a], sb = s.ambient_to_sub[b];
        if (sa >= 0 && sb >= 0) g.edges.emplace_back(sa, sb);
    }
    g.rebuild_adjacency();
    s.lattice = std::make_unique<Lattice>(g);
    return s;
}

// restriction of classes: R1(l') is the class of the sublattice with
// (R1 l', E_v)_1 = (l', E_v) for every subset vertex v
inline QVec restrict_class(const Lattice& L, const Sublattice& S, const QVec& lp) {
    if (!S.lattice) return {};
    const Lattice& L1 = *S.lattice;
    QVec out(L1.n(), Rat(0));
    for (int i = 0; i < L1.n(); ++i) {
        Rat a = -L.pairing_basis(lp, S.verts[i]);   // E*-coordinate in the sublattice
        if (a != 0) {
            QVec col = L1.dual_basis(i);
            for (int w = 0; w < L1.n(); ++w) out[w] += a * col[w];
        }
    }
    return out;
}

}  // namespace plumblat
