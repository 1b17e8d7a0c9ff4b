#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "plumblat/generic.hpp"
#include "plumblat/lattice.hpp"
#include "plumblat/minimize.hpp"
#include "plumblat/types.hpp"

namespace plumblat {

// answers h1 of a line bundle with given ambient twist on a cycle of the substructure.
// cycles and twists are in ambient coordinates.
class H1Oracle {
public:
    virtual ~H1Oracle() = default;
    virtual Int evaluate(const IVec& A, const QVec& twist) = 0;
    virtual std::string kind() const = 0;

    unsigned long long queries() const { return queries_.load(); }
    virtual unsigned long long substitutions() const { return 0; }
    virtual unsigned long long memo_entries() const { return 0; }

protected:
    std::atomic<unsigned long long> queries_{0};
};

class ZeroOracle final : public H1Oracle {
public:
    Int evaluate(const IVec&, const QVec&) override {
        ++queries_;
        return 0;
    }
    std::string kind() const override { return "zero"; }
};

// total lookup table keyed by (cycle, E*-coordinates of the twist); misses are hard errors
class TableOracle final : public H1Oracle {
public:
    TableOracle(const Lattice& L, std::map<std::string, Int> entries)
        : lattice_(&L), entries_(std::move(entries)) {}

    static std::string key(const IVec& A, const IVec& twist_estar) {
        std::ostringstream os;
        for (Int x : A) os << x << ',';
        os << ';';
        for (Int x : twist_estar) os << x << ',';
        return os.str();
    }

    Int evaluate(const IVec& A, const QVec& twist) override {
        ++queries_;
        if (is_zero(A)) return 0;
        IVec te;
        try {
            te = lattice_->estar_coords(twist);
        } catch (const Error&) {
            throw Error("table oracle: twist is not in the dual lattice: " + echo(A, twist));
        }
        auto it = entries_.find(key(A, te));
        if (it == entries_.end())
            throw Error("table oracle miss: no entry for " + echo(A, twist));
        return it->second;
    }

    std::string kind() const override { return "table"; }

private:
    std::string echo(const IVec& A, const QVec& twist) const {
        std::ostringstream os;
        os << "cycle (";
        for (size_t i = 0; i < A.size(); ++i) os << (i ? "," : "") << A[i];
        os << "), twist (";
        for (size_t i = 0; i < twist.size(); ++i) os << (i ? "," : "") << rat_to_string(twist[i]);
        os << ")";
        return os.str();
    }

    const Lattice* lattice_;
    std::map<std::string, Int> entries_;
};

// generic analytic structure on a vertex subset, recursively relative to a smaller one.
// twist 0 evaluates the structure-sheaf formula per support component; any other twist
// evaluates the generic-bundle formula. Every fresh evaluation with a nonzero twist is a
// generic substitution and is counted.
class GenericRecursiveOracle final : public H1Oracle {
public:
    GenericRecursiveOracle(const Lattice& L, std::vector<int> verts, std::vector<int> sub_verts,
                           std::shared_ptr<H1Oracle> sub)
        : lattice_(&L), verts_(std::move(verts)), sub_verts_(std::move(sub_verts)),
          sub_(std::move(sub)) {
        mask_ = L.mask_of(verts_);
        sub_mask_ = L.mask_of(sub_verts_);
    }

    Int evaluate(const IVec& A, const QVec& twist) override {
        ++queries_;
        const Lattice& L = *lattice_;
        for (int v = 0; v < L.n(); ++v) {
            if (A[v] < 0) throw Error("oracle cycle must be effective");
            if (A[v] > 0 && !mask_[v]) throw Error("oracle cycle not supported in its subset");
        }
        if (is_zero(A)) return 0;
        std::string k = memo_key(A, twist);
        {
            std::lock_guard<std::mutex> g(mu_);
            auto it = memo_.find(k);
            if (it != memo_.end()) {
                ++hits_;
                return it->second;
            }
        }
        Int val = is_zero(twist) ? eval_trivial(A) : eval_twisted(A, twist);
        {
            std::lock_guard<std::mutex> g(mu_);
            auto [it, inserted] = memo_.emplace(k, val);
            if (inserted && !is_zero(twist)) ++subs_;
            (void)it;
        }
        return val;
    }

    std::string kind() const override { return "generic-recursive"; }
    unsigned long long substitutions() const override {
        unsigned long long s = subs_.load();
        if (sub_) s += sub_->substitutions();
        return s;
    }
    unsigned long long memo_entries() const override {
        std::lock_guard<std::mutex> g(mu_);
        unsigned long long m = memo_.size();
        if (sub_) m += sub_->memo_entries();
        return m;
    }

    void set_scan_guard(unsigned long long g) { scan_guard_ = g; }

private:
    static std::string memo_key(const IVec& A, const QVec& t) {
        std::ostringstream os;
        for (Int x : A) os << x << ',';
        os << ';';
        for (const auto& x : t) os << rat_to_string(x) << ',';
        return os.str();
    }

    Int sub_eval(const IVec& A, const QVec& twist) {
        if (!sub_ || sub_verts_.empty()) return 0;
        return sub_->evaluate(A, twist);
    }

    // h1 of the structure sheaf of A: blockwise over support components
    Int eval_trivial(const IVec& A) {
        const Lattice& L = *lattice_;
        Int total = 0;
        for (const auto& comp : L.support_components(A)) {
            IVec ac(L.n(), 0), lo(L.n(), 0);
            for (int v : comp) {
                ac[v] = A[v];
                lo[v] = 1;
            }
            if (!sub_ || sub_verts_.empty()) {
                auto r = min_chi_box_general(L, QVec(L.n(), Rat(0)), lo, ac, false);
                total += 1 - rat_to_int(r.value, "oracle component min");
            } else {
                Rat best;
                bool have = false;
                scan_box(lo, ac, [&](const IVec& m) {
                    QVec mq = to_qvec(m);
                    QVec neg(L.n());
                    for (int v = 0; v < L.n(); ++v) neg[v] = -mq[v];
                    Rat val = L.chi(mq) - Rat(static_cast<long>(sub_eval(sub_cycle(ac, m), neg)));
                    if (!have || val < best) {
                        best = val;
                        have = true;
                    }
                });
                total += 1 - rat_to_int(best, "oracle component min");
            }
        }
        return total;
    }

    // -min_{0 <= m <= A} [ chi(m) + (t, m) - sub(min(A - m, A|sub), t - m) ]
    Int eval_twisted(const IVec& A, const QVec& t) {
        const Lattice& L = *lattice_;
        QVec negt(L.n());
        for (int v = 0; v < L.n(); ++v) negt[v] = -t[v];
        if (!sub_ || sub_verts_.empty()) {
            // chi(m) + (t, m) = chi(-t + m) - chi(-t)
            auto r = min_chi_box(L, negt, A);
            return rat_to_int(L.chi(negt) - r.value, "oracle value");
        }
        Rat best;
        bool have = false;
        scan_box(IVec(L.n(), 0), A, [&](const IVec& m) {
            QVec mq = to_qvec(m);
            QVec tm(L.n());
            for (int v = 0; v < L.n(); ++v) tm[v] = t[v] - mq[v];
            Rat val = L.chi(mq) + L.pairing(t, mq) -
                      Rat(static_cast<long>(sub_eval(sub_cycle(A, m), tm)));
            if (!have || val < best) {
                best = val;
                have = true;
            }
        });
        return rat_to_int(-best, "oracle value");
    }

    // min(A - m, A truncated to the substructure), componentwise
    IVec sub_cycle(const IVec& A, const IVec& m) const {
        IVec out(A.size(), 0);
        for (size_t v = 0; v < A.size(); ++v)
            if (sub_mask_[v]) out[v] = A[v] - m[v];
        return out;
    }

    template <typename F>
    void scan_box(const IVec& lo, const IVec& hi, F&& f) const {
        unsigned long long vol = 1;
        for (size_t v = 0; v < lo.size(); ++v) {
            vol *= static_cast<unsigned long long>(hi[v] - lo[v] + 1);
            if (vol > scan_guard_) throw Error("oracle scan box exceeds guard");
        }
        IVec m = lo;
        while (true) {
            f(m);
            int d = static_cast<int>(m.size()) - 1;
            while (d >= 0 && m[d] == hi[d]) {
                m[d] = lo[d];
                --d;
            }
            if (d < 0) break;
            ++m[d];
        }
    }

    const Lattice* lattice_;
    std::vector<int> verts_;
    std::vector<int> sub_verts_;
    std::shared_ptr<H1Oracle> sub_;
    std::vector<char> mask_, sub_mask_;
    mutable std::mutex mu_;
    std::map<std::string, Int> memo_;
    std::atomic<unsigned long long> hits_{0}, subs_{0};
    unsigned long long scan_guard_ = 1'000'000ULL;
};

}  // namespace plumblat
