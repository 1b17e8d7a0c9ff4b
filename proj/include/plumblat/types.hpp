#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumblat {

using Rat = mpq_class;
using Int = long long;
using IVec = std::vector<Int>;   // integral lattice vector, file vertex order
using QVec = std::vector<Rat>;   // rational lattice vector

// domain error (bad input, guard tripped, oracle miss)
struct Error : std::runtime_error {
    explicit Error(const std::string& m) : std::runtime_error(m) {}
};

// invariant violation inside the library itself (stabilization failure etc.)
struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& m) : std::runtime_error(m) {}
};

inline QVec to_qvec(const IVec& v) {
    QVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(static_cast<long>(v[i]));
    return out;
}

inline bool is_integral(const QVec& v) {
    for (const auto& x : v)
        if (x.get_den() != 1) return false;
    return true;
}

inline IVec to_ivec(const QVec& v) {
    IVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i].get_den() != 1) throw Error("expected integral vector");
        out[i] = static_cast<Int>(v[i].get_num().get_si());
    }
    return out;
}

inline bool lex_less(const IVec& a, const IVec& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

inline bool is_zero(const IVec& v) {
    for (Int x : v)
        if (x != 0) return false;
    return true;
}

inline bool is_zero(const QVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

// floor of a rational
inline mpz_class rat_floor(const Rat& x) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline mpz_class rat_ceil(const Rat& x) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

// "p/q" or "n"
inline Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw Error("empty rational literal");
    Rat r;
    if (r.set_str(s, 10) != 0) throw Error("bad rational literal: '" + s + "'");
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rat& x) { return x.get_str(); }

}  // namespace plumblat
