#pragma once

#include <string>
#include <vector>

#include "plumblat/lattice.hpp"
#include "plumblat/types.hpp"

namespace plumblat {

// record of a generalized Laufer run: the vertices bumped, in order, and the endpoint
struct ComputationSequence {
    std::vector<int> steps;
    QVec terminal;
};

constexpr unsigned long long kLauferGuard = 10'000'000ULL;

// x := x + E_v for the smallest v with (x, E_v) > 0, until none; from x = E this
// terminates at the minimal (fundamental) cycle
inline ComputationSequence laufer_run(const Lattice& L, QVec x) {
    ComputationSequence seq;
    QVec pair(L.n());
    for (int v = 0; v < L.n(); ++v) pair[v] = L.pairing_basis(x, v);
    unsigned long long iter = 0;
    while (true) {
        int pick = -1;
        for (int v = 0; v < L.n(); ++v)
            if (pair[v] > 0) {
                pick = v;
                break;
            }
        if (pick < 0) break;
        x[pick] += 1;
        pair[pick] += Rat(static_cast<long>(L.euler(pick)));
        for (int w : L.graph().adj[pick]) pair[w] += 1;
        seq.steps.push_back(pick);
        if (++iter > kLauferGuard) throw InternalError("computation sequence did not terminate");
    }
    seq.terminal = x;
    return seq;
}

struct ZminResult {
    IVec zmin;
    std::vector<int> steps;
};

inline ZminResult laufer_zmin(const Lattice& L) {
    QVec e(L.n(), Rat(1));
    auto seq = laufer_run(L, e);
    return {to_ivec(seq.terminal), seq.steps};
}

// smallest s in S' with s >= l' and s - l' integral
inline ComputationSequence laufer_saturate(const Lattice& L, const QVec& lp) {
    return laufer_run(L, lp);
}

}  // namespace plumblat
