#pragma once

#include <string>
#include <vector>

#include <plumblat/plumblat.hpp>

namespace plumblat::testing {

inline QVec qv(const std::vector<std::string>& parts) {
    QVec out;
    for (const auto& p : parts) out.push_back(rat_from_string(p));
    return out;
}

inline QVec negated(const QVec& x) {
    QVec out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
    return out;
}

inline QVec scaled(const QVec& x, long k) {
    QVec out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = Rat(k) * x[i];
    return out;
}

inline IVec iscaled(const IVec& x, Int k) {
    IVec out(x);
    for (auto& c : out) c *= k;
    return out;
}

inline QVec added(const QVec& a, const QVec& b) {
    QVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline std::vector<std::string> strs(const QVec& x) {
    std::vector<std::string> out;
    for (const auto& r : x) out.push_back(rat_to_string(r));
    return out;
}

}  // namespace plumblat::testing
