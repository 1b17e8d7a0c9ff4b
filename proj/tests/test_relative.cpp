#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"

using namespace plumblat;
using namespace plumblat::testing;

namespace {

QVec dual_combo(const Lattice& L, const std::vector<long>& coeffs) {
    QVec out(L.n(), Rat(0));
    for (int v = 0; v < L.n(); ++v) {
        QVec col = L.dual_basis(v);
        for (int w = 0; w < L.n(); ++w) out[w] += Rat(coeffs[v]) * col[w];
    }
    return out;
}

}  // namespace

TEST_CASE("substructure construction") {
    Lattice L(graph_d4());
    auto empty = sub_empty(L);
    CHECK(empty.empty());
    CHECK(empty.oracle->kind() == "zero");

    auto gen = sub_generic(L, {3, 1, 1});
    CHECK(gen.v1 == std::vector<int>{1, 3});
    CHECK(gen.mask == std::vector<char>{0, 1, 0, 1});
    CHECK(gen.oracle->kind() == "generic-recursive");

    CHECK(sub_generic(L, {}).empty());
}

TEST_CASE("tower validation") {
    Lattice L(graph_a2());
    CHECK_THROWS_WITH(validate_tower(L, {}), Catch::Matchers::ContainsSubstring("at least one"));
    CHECK_THROWS_WITH(validate_tower(L, {{0}, {}}),
                      Catch::Matchers::ContainsSubstring("nonempty"));
    CHECK_THROWS_WITH(validate_tower(L, {{0}, {0, 1}}),
                      Catch::Matchers::ContainsSubstring("disjoint"));
    CHECK_THROWS_WITH(validate_tower(L, {{0}}), Catch::Matchers::ContainsSubstring("cover"));
    CHECK_THROWS_WITH(validate_tower(L, {{0, 5}}),
                      Catch::Matchers::ContainsSubstring("out of range"));

    CHECK(sub_tower_prefix(L, {{0}, {1}}, 1).empty());
    auto pre = sub_tower_prefix(L, {{0}, {1}}, 2);
    CHECK(pre.v1 == std::vector<int>{0});
    CHECK_THROWS_WITH(sub_tower_prefix(L, {{0}, {1}}, 3),
                      Catch::Matchers::ContainsSubstring("layer index"));
}

TEST_CASE("relative bundle h1 on fixed instances") {
    {
        Lattice L(graph_a2());
        auto sub = sub_generic(L, {0});
        QVec lp = negated(L.dual_basis(1));
        auto a = h1_relative_bundle(L, {1, 1}, lp, sub);
        CHECK(a.h1 == 0);
        CHECK(a.argmin == IVec{0, 0});
        CHECK(h1_relative_bundle(L, {2, 2}, lp, sub).h1 == 0);
        auto c = h1_relative_bundle(L, {2, 2}, QVec(2, Rat(0)), sub);
        CHECK(c.h1 == 0);
        CHECK(c.argmin == IVec{0, 0});
    }
    {
        Lattice L(graph_star237());
        auto sub = sub_generic(L, {1, 2, 3});
        QVec lp = negated(L.dual_basis(0));
        IVec z2{12, 6, 4, 2};
        auto a = h1_relative_bundle(L, z2, lp, sub);
        CHECK(a.h1 == 0);
        CHECK(a.argmin == IVec{0, 0, 0, 0});
        auto b = h1_relative_bundle(L, z2, QVec(4, Rat(0)), sub);
        CHECK(b.h1 == 0);
        CHECK(b.argmin == IVec{0, 0, 0, 0});
    }
    {
        Lattice L(graph_a2());
        CHECK_THROWS_WITH(h1_relative_bundle(L, {1, 1}, qv({"1/5", "0"}), sub_empty(L)),
                          Catch::Matchers::ContainsSubstring("dual lattice"));
    }
}

TEST_CASE("relative h1 with empty substructure is the generic bundle h1") {
    std::mt19937_64 rng(321);
    for (int iter = 0; iter < 15; ++iter) {
        Graph g = random_tree(rng(), 5);
        Lattice L(g);
        std::vector<long> coeffs(L.n());
        for (auto& c : coeffs) c = static_cast<long>(rng() % 3) - 1;
        QVec lp = dual_combo(L, coeffs);
        IVec Z(L.n());
        for (auto& z : Z) z = static_cast<Int>(rng() % 3);
        auto rel = h1_relative_bundle(L, Z, lp, sub_empty(L));
        auto gen = h1_generic_bundle(L, Z, lp);
        INFO("iter " << iter);
        CHECK(rel.h1 == gen.h1);
        CHECK(rel.argmin == gen.argmin);
    }
}

TEST_CASE("relative structure sheaf h1") {
    Lattice L(graph_star237());
    auto arms = sub_generic(L, {1, 2, 3});
    IVec zmin{6, 3, 2, 1};
    CHECK(h1_oz_relgen(L, zmin, arms) == 1);
    CHECK(h1_oz_relgen(L, iscaled(zmin, 2), arms) == 1);
    CHECK(h1_oz_relgen(L, iscaled(zmin, 3), arms) == 1);
    CHECK(h1_oz_relgen(L, zmin, sub_empty(L)) == h1_generic_cycle(L, zmin));
}

TEST_CASE("relative h0 agrees with the Euler characteristic") {
    Lattice L(graph_star237());
    auto arms = sub_generic(L, {1, 2, 3});
    IVec zmin{6, 3, 2, 1};
    QVec lp = negated(L.dual_basis(0));
    auto h0 = h0_relative_bundle(L, zmin, lp, arms);
    CHECK(h0.h0 == h0.chi + h0.h1);
    CHECK(h0.chi == chi_sheaf(L, zmin, lp));
}

TEST_CASE("dominance with empty substructure") {
    Lattice L(graph_a1());
    {
        auto rep = relative_dominant(L, {4}, qv({"-1/2"}), sub_empty(L));
        CHECK(rep.dominant);
        CHECK_FALSE(rep.witness.has_value());
        CHECK(rep.margin == 2);
    }
    {
        auto rep = relative_dominant(L, {4}, qv({"1/2"}), sub_empty(L));
        CHECK_FALSE(rep.dominant);
        REQUIRE(rep.witness.has_value());
        CHECK(*rep.witness == IVec{1});
        CHECK(rep.margin == 0);
    }
}

TEST_CASE("dominance implies the h1 is the oracle value") {
    // dominant pairs compute their h1 at l = 0
    Lattice L(graph_star237());
    auto arms = sub_generic(L, {1, 2, 3});
    QVec lp = negated(L.dual_basis(0));
    IVec z2{12, 6, 4, 2};
    auto rep = relative_dominant(L, z2, lp, arms);
    auto h1 = h1_relative_bundle(L, z2, lp, arms);
    if (rep.dominant) {
        IVec Z1 = detail::truncate_ivec(z2, arms.mask);
        CHECK(h1.h1 == arms.oracle->evaluate(Z1, lp));
        CHECK(h1.argmin == IVec{0, 0, 0, 0});
    }
}

TEST_CASE("semigroup membership on fixed classes") {
    {
        Lattice L(graph_a1());
        auto empty = sub_empty(L);
        CHECK(san_member(L, L.dual_basis(0), empty).member);
        CHECK(san_member(L, scaled(L.dual_basis(0), 2), empty).member);
        CHECK(san_member(L, qv({"1"}), empty).member);
        auto neg = san_member(L, negated(L.dual_basis(0)), empty);
        CHECK_FALSE(neg.member);
        CHECK(neg.reason == "outside the Lipman cone");
        auto zero = san_member(L, qv({"0"}), empty);
        CHECK(zero.member);
        CHECK(zero.reason == "zero class");
    }
    {
        Lattice L(graph_a2());
        auto empty = sub_empty(L);
        CHECK(san_member(L, L.dual_basis(0), empty).member);
        CHECK(san_member(L, added(L.dual_basis(0), L.dual_basis(1)), empty).member);
    }
    {
        Lattice L(graph_minus3());
        auto empty = sub_empty(L);
        CHECK(san_member(L, L.dual_basis(0), empty).member);
        CHECK(san_member(L, scaled(L.dual_basis(0), 2), empty).member);
    }
    {
        Lattice L(graph_a4());
        CHECK(san_member(L, L.dual_basis(1), sub_empty(L)).member);
    }
    {
        Lattice L(graph_star237());
        auto empty = sub_empty(L);
        CHECK(san_member(L, L.dual_basis(0), empty).member);
        CHECK(san_member(L, L.dual_basis(1), empty).member);
        CHECK(san_member(L, to_qvec(IVec{6, 3, 2, 1}), empty).member);
        auto e = san_member(L, QVec(4, Rat(1)), empty);
        CHECK_FALSE(e.member);
        CHECK(e.reason == "outside the Lipman cone");
        CHECK_FALSE(san_member(L, L.zk(), empty).member);
    }
    {
        Lattice L(graph_e8());
        CHECK(san_member(L, L.dual_basis(0), sub_empty(L)).member);
    }
    {
        Lattice L(graph_a1());
        CHECK_THROWS_WITH(san_member(L, qv({"1/3"}), sub_empty(L)),
                          Catch::Matchers::ContainsSubstring("dual lattice"));
    }
}

TEST_CASE("natural bundle h1 on the germ") {
    {
        Lattice L(graph_a1());
        auto empty = sub_empty(L);
        auto a = h1_natural(L, qv({"1"}), empty);
        CHECK(a.h1 == 1);
        CHECK(a.effective_branch);
        CHECK(a.d_value == 0);
        CHECK(h1_natural(L, qv({"-1"}), empty).h1 == 0);
        CHECK_FALSE(h1_natural(L, qv({"-1"}), empty).effective_branch);
        auto z = h1_natural(L, qv({"0"}), empty);
        CHECK(z.h1 == 0);
        CHECK(z.effective_branch);
        CHECK(h1_natural(L, negated(L.dual_basis(0)), empty).h1 == 0);
    }
    {
        Lattice L(graph_minus3());
        CHECK(h1_natural(L, negated(L.dual_basis(0)), sub_empty(L)).h1 == 0);
    }
    {
        Lattice L(graph_a4());
        CHECK(h1_natural(L, negated(L.dual_basis(1)), sub_empty(L)).h1 == 0);
    }
    {
        Lattice L(graph_star237());
        auto empty = sub_empty(L);
        auto z = h1_natural(L, QVec(4, Rat(0)), empty);
        CHECK(z.h1 == 1);
        CHECK(z.effective_branch);
        CHECK(z.d_value == 1);
        CHECK(h1_natural(L, negated(L.dual_basis(0)), empty).h1 == 0);
        auto e = h1_natural(L, QVec(4, Rat(1)), empty);
        CHECK(e.h1 == 7);
        CHECK(e.d_value == 1);
        CHECK(h1_natural(L, negated(L.zk()), empty).h1 == 0);
    }
    {
        Lattice L(graph_a1());
        CHECK_THROWS_WITH(h1_natural(L, qv({"2/3"}), sub_empty(L)),
                          Catch::Matchers::ContainsSubstring("dual lattice"));
    }
}

TEST_CASE("relative geometric genus") {
    {
        Lattice L(graph_a2());
        CHECK(pg_relgen(L, sub_empty(L)).pg == pg_generic(L));
        CHECK(pg_relgen(L, sub_generic(L, {0})).pg == 0);
    }
    {
        Lattice L(graph_d4());
        CHECK(pg_relgen(L, sub_generic(L, {1})).pg == 0);
    }
    {
        Lattice L(graph_star237());
        CHECK(pg_relgen(L, sub_empty(L)).pg == 1);
    }
}

TEST_CASE("relative rationality") {
    {
        Lattice L(graph_d4());
        auto r = relatively_rational(L, {2, 1, 1, 1}, sub_generic(L, {1}));
        CHECK(r.rational);
        CHECK_FALSE(r.witness.has_value());
        CHECK(r.margin > 0);
    }
    {
        Lattice L(graph_star237());
        auto arms = sub_generic(L, {1, 2, 3});
        auto r = relatively_rational(L, {6, 3, 2, 1}, arms);
        CHECK_FALSE(r.rational);
        REQUIRE(r.witness.has_value());
        CHECK(*r.witness == IVec{2, 0, 0, 0});
        auto r2 = relatively_rational(L, {12, 6, 4, 2}, arms);
        CHECK_FALSE(r2.rational);
        REQUIRE(r2.witness.has_value());
        CHECK(*r2.witness == IVec{2, 0, 0, 0});
    }
    {
        Lattice L(graph_a2());
        CHECK(relatively_rational(L, {2, 2}, sub_generic(L, {0})).rational);
    }
}

TEST_CASE("effective Cartier and fiber dimensions") {
    Lattice L(graph_star237());
    IVec zmin{6, 3, 2, 1};
    QVec lp = negated(L.dual_basis(0));
    auto d = eca_dims(L, zmin, lp, sub_empty(L));
    CHECK(d.eca == 6);
    CHECK(d.eca_rel == 6);
    CHECK(d.fiber == 5);
}

TEST_CASE("dominance tables for multiples of a dual class") {
    {
        Lattice L(graph_star237());
        auto chk = elliptic_dominance_check(L, 0, 5, sub_empty(L));
        REQUIRE(chk.table.size() == 5);
        for (const auto& e : chk.table) {
            INFO("N = " << e.N);
            CHECK(e.dominant);
            CHECK(e.margin == 1);
        }
        CHECK(chk.implication_holds);
    }
    {
        Lattice L(graph_star237());
        auto arms = sub_generic(L, {1, 2, 3});
        auto chk = elliptic_dominance_check(L, 0, 2, arms);
        REQUIRE(chk.table.size() == 2);
        for (const auto& e : chk.table) {
            INFO("N = " << e.N);
            CHECK(e.dominant);
            CHECK(e.margin > 0);
        }
        CHECK(chk.implication_holds);
    }
    {
        Lattice L(graph_a1());
        auto chk = elliptic_dominance_check(L, 0, 2, sub_empty(L));
        CHECK(chk.table[0].dominant);
        CHECK(chk.table[1].dominant);
        CHECK(chk.implication_holds);
    }
    {
        Lattice L(graph_star237());
        auto arms = sub_generic(L, {1, 2, 3});
        CHECK_THROWS_WITH(elliptic_dominance_check(L, 1, 2, arms),
                          Catch::Matchers::ContainsSubstring("outside the substructure"));
        CHECK_THROWS_WITH(elliptic_dominance_check(L, 9, 2, arms),
                          Catch::Matchers::ContainsSubstring("out of range"));
        CHECK_THROWS_WITH(elliptic_dominance_check(L, 0, 0, sub_empty(L)),
                          Catch::Matchers::ContainsSubstring("at least one"));
    }
}

TEST_CASE("natural bundle along a tower") {
    Lattice L(graph_a2());
    std::vector<std::vector<int>> layers{{0}, {1}};
    {
        QVec lp = negated(added(L.dual_basis(0), L.dual_basis(1)));
        auto r = relgen_natural(L, {2, 2}, lp, layers, 2);
        CHECK(r.h1 == 0);
        CHECK(r.coefficients_positive);
        CHECK(r.nonpositive.empty());
        CHECK(r.substitutions >= 1);
        auto gen = h1_generic_bundle(L, {2, 2}, lp);
        CHECK(r.h1 == gen.h1);
    }
    {
        CHECK_THROWS_WITH(relgen_natural(L, {2, 2}, negated(L.dual_basis(0)), layers, 2),
                          Catch::Matchers::ContainsSubstring("coefficient a = 0 at 'v1'"));
    }
    {
        auto r = relgen_natural(L, {1, 1}, L.dual_basis(1), layers, 2);
        CHECK_FALSE(r.coefficients_positive);
        CHECK(r.nonpositive == std::vector<int>{1});
        CHECK(r.h1 >= 0);
    }
    {
        // zero coefficient off the support of Z is allowed
        auto r = relgen_natural(L, {1, 0}, negated(L.dual_basis(0)), layers, 1);
        CHECK(r.h1 >= 0);
    }
    {
        CHECK_THROWS_WITH(relgen_natural(L, {1, 1}, qv({"1/7", "0"}), layers, 2),
                          Catch::Matchers::ContainsSubstring("dual lattice"));
        CHECK_THROWS_WITH(relgen_natural(L, {1, 1}, QVec(2, Rat(1)), layers, 5),
                          Catch::Matchers::ContainsSubstring("layer index"));
    }
}

TEST_CASE("scan guard limits the box volume") {
    Lattice L(graph_a2());
    auto sub = sub_generic(L, {0});
    unsigned long long old = detail::scan_guard().load();
    detail::scan_guard().store(10);
    CHECK_THROWS_WITH(relative_dominant(L, {3, 3}, QVec(2, Rat(0)), sub),
                      Catch::Matchers::ContainsSubstring("exceeds guard"));
    detail::scan_guard().store(old);
    CHECK_NOTHROW(relative_dominant(L, {3, 3}, QVec(2, Rat(0)), sub));
}

TEST_CASE("relative h1 bounds") {
    // oracle(Z1, l') <= h1_rel and h1_rel >= oracle(Z1, l') - min over the complement
    std::mt19937_64 rng(2024);
    Lattice L(graph_star237());
    auto arms = sub_generic(L, {1, 2, 3});
    for (int iter = 0; iter < 8; ++iter) {
        std::vector<long> coeffs(L.n());
        for (auto& c : coeffs) c = -static_cast<long>(rng() % 2);
        QVec lp = dual_combo(L, coeffs);
        IVec Z{static_cast<Int>(1 + rng() % 3), static_cast<Int>(1 + rng() % 3),
               static_cast<Int>(1 + rng() % 2), static_cast<Int>(1 + rng() % 2)};
        auto h1 = h1_relative_bundle(L, Z, lp, arms);
        IVec Z1 = detail::truncate_ivec(Z, arms.mask);
        Int lower = arms.oracle->evaluate(Z1, lp);
        INFO("iter " << iter);
        CHECK(h1.h1 >= lower);
    }
}

TEST_CASE("parallel scans agree with sequential ones") {
    Lattice L(graph_star237());
    auto arms = sub_generic(L, {1, 2, 3});
    QVec lp = negated(L.dual_basis(0));
    IVec Z{6, 3, 2, 1};
    auto seq = h1_relative_bundle(L, Z, lp, arms, false);
    auto par = h1_relative_bundle(L, Z, lp, arms, true);
    CHECK(seq.h1 == par.h1);
    CHECK(seq.argmin == par.argmin);
    auto dseq = relative_dominant(L, Z, lp, arms, false);
    auto dpar = relative_dominant(L, Z, lp, arms, true);
    CHECK(dseq.dominant == dpar.dominant);
    CHECK(dseq.margin == dpar.margin);
    CHECK(dseq.witness == dpar.witness);
}
