#pragma once

#include <string>
#include <vector>

#include "plumblat/lattice.hpp"
#include "plumblat/minimize.hpp"
#include "plumblat/types.hpp"

namespace plumblat {

inline Int rat_to_int(const Rat& x, const char* what) {
    if (x.get_den() != 1) throw InternalError(std::string(what) + " is not an integer");
    return static_cast<Int>(x.get_num().get_si());
}

inline void check_effective_cycle(const Lattice& L, const IVec& Z) {
    if (static_cast<int>(Z.size()) != L.n()) throw Error("cycle dimension mismatch");
    for (int v = 0; v < L.n(); ++v)
        if (Z[v] < 0) throw Error("cycle must be effective");
}

// h1 of the structure sheaf of Z with generic analytic structure:
// sum over components C of supp Z of 1 - min_{E_C <= l <= Z_C} chi(l)
inline Int h1_generic_cycle(const Lattice& L, const IVec& Z) {
    check_effective_cycle(L, Z);
    Int total = 0;
    for (const auto& comp : L.support_components(Z)) {
        IVec lo(L.n(), 0), hi(L.n(), 0);
        for (int v : comp) {
            lo[v] = 1;
            hi[v] = Z[v];
        }
        auto r = min_chi_box_general(L, QVec(L.n(), Rat(0)), lo, hi, false);
        total += 1 - rat_to_int(r.value, "component min chi");
    }
    return total;
}

// a Chern class is realizable by a line bundle on some Z >= 0 iff -l' is in S'
inline bool chern_realizable(const Lattice& L, const QVec& lp) {
    QVec neg(L.n());
    for (int v = 0; v < L.n(); ++v) neg[v] = -lp[v];
    return L.lipman_contains(neg);
}

struct BundleH1 {
    Int h1;
    IVec argmin;
    unsigned long long explored;
    bool realizable;  // advisory: false when l' is not in -S'
};

// h1(Z, L_gen) for a generic line bundle of Chern class l' on Z:
// chi(-l') - min_{0 <= l <= Z} chi(-l' + l)
inline BundleH1 h1_generic_bundle(const Lattice& L, const IVec& Z, const QVec& lp) {
    check_effective_cycle(L, Z);
    if (!L.in_dual_lattice(lp)) throw Error("Chern class is not in the dual lattice");
    QVec base(L.n());
    for (int v = 0; v < L.n(); ++v) base[v] = -lp[v];
    auto r = min_chi_box(L, base, Z);
    Rat h1 = L.chi(base) - r.value;
    return {rat_to_int(h1, "h1"), r.argmin, r.explored, chern_realizable(L, lp)};
}

// chi of the sheaf: chi(-l'+Z) - chi(-l') = chi(Z) + (l', Z)
inline Int chi_sheaf(const Lattice& L, const IVec& Z, const QVec& lp) {
    check_effective_cycle(L, Z);
    QVec zq = to_qvec(Z);
    Rat c = L.chi(zq) + L.pairing(lp, zq);
    return rat_to_int(c, "sheaf Euler characteristic");
}

struct BundleH0 {
    Int h0;
    Int h1;
    Int chi;
    bool realizable;
};

inline BundleH0 h0_generic_bundle(const Lattice& L, const IVec& Z, const QVec& lp) {
    auto b = h1_generic_bundle(L, Z, lp);
    Int cs = chi_sheaf(L, Z, lp);
    Int h0 = cs + b.h1;
    if (b.realizable && h0 < 0) throw InternalError("negative h0 for a realizable class");
    return {h0, b.h1, cs, b.realizable};
}

// I(l') = vertices pairing nontrivially with l'
inline std::vector<int> estar_support(const Lattice& L, const QVec& lp) {
    std::vector<int> out;
    for (int v = 0; v < L.n(); ++v)
        if (L.pairing_basis(lp, v) != 0) out.push_back(v);
    return out;
}

// h1 drop when the support vertices I are removed from Z
inline Int cohomology_drop(const Lattice& L, const IVec& Z, const std::vector<int>& I) {
    check_effective_cycle(L, Z);
    IVec tr = Z;
    for (int v : I) {
        if (v < 0 || v >= L.n()) throw Error("vertex index out of range");
        tr[v] = 0;
    }
    return h1_generic_cycle(L, Z) - h1_generic_cycle(L, tr);
}

// geometric genus with generic analytic structure: 1 - min_{l > 0} chi(l)
inline Int pg_generic(const Lattice& L) {
    auto cm = min_chi_positive(L);
    return 1 - rat_to_int(cm.res.value, "min chi");
}

}  // namespace plumblat
