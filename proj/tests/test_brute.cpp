#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "helpers.hpp"

using namespace plumblat;
using namespace plumblat::testing;

TEST_CASE("lexicographic point iteration") {
    IVec lo{0, 0}, hi{1, 2}, m = lo;
    std::vector<IVec> seen{m};
    while (brute::next_point(m, lo, hi)) seen.push_back(m);
    std::vector<IVec> want{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}};
    CHECK(seen == want);
}

TEST_CASE("enumeration budget") {
    brute::Budget b;
    b.limit = 5;
    CHECK_THROWS_WITH(
        brute::minimize_box(IVec{0, 0}, IVec{2, 2}, false,
                            [](const IVec&) { return Rat(0); }, b),
        Catch::Matchers::ContainsSubstring("budget exceeded"));
    brute::Budget ok;
    CHECK_THROWS_WITH(brute::minimize_box(IVec{1}, IVec{0}, false,
                                          [](const IVec&) { return Rat(0); }, ok),
                      Catch::Matchers::ContainsSubstring("empty brute box"));
}

TEST_CASE("brute chi minimum matches the closed computation") {
    brute::Budget b;
    Lattice L(graph_star237());
    auto slow = brute::min_chi(L, QVec(4, Rat(0)), IVec(4, 0), {6, 6, 6, 6}, true, b);
    CHECK(slow.value == 0);
    CHECK(slow.argmin == IVec{2, 1, 1, 1});
}

TEST_CASE("nested spec construction") {
    auto none = brute::nested_prefix({{0}, {1}}, 1);
    CHECK(none == nullptr);
    auto one = brute::nested_prefix({{0}, {1}}, 2);
    REQUIRE(one != nullptr);
    CHECK(one->verts == std::vector<int>{0});
    CHECK(one->sub == nullptr);
    auto two = brute::nested_prefix({{1}, {0}, {2}}, 3);
    REQUIRE(two != nullptr);
    CHECK(two->verts == std::vector<int>{0, 1});
    REQUIRE(two->sub != nullptr);
    CHECK(two->sub->verts == std::vector<int>{1});
}

TEST_CASE("nested evaluation base cases") {
    Lattice L(graph_a2());
    brute::Budget b;
    CHECK(brute::nested_eval(L, nullptr, {1, 1}, QVec(2, Rat(0)), b) == 0);
    auto spec = brute::nested_prefix({{0}, {1}}, 2);
    CHECK(brute::nested_eval(L, spec.get(), {0, 0}, QVec(2, Rat(0)), b) == 0);
    CHECK_THROWS_WITH(brute::nested_eval(L, spec.get(), {0, 1}, QVec(2, Rat(0)), b),
                      Catch::Matchers::ContainsSubstring("not supported"));
    CHECK_THROWS_WITH(brute::nested_eval(L, spec.get(), {-1, 0}, QVec(2, Rat(0)), b),
                      Catch::Matchers::ContainsSubstring("effective"));
}

TEST_CASE("nested evaluation matches the memoized oracle") {
    Lattice L(graph_d4());
    brute::Budget b;
    auto spec = brute::nested_prefix({{0, 1}, {2, 3}}, 2);
    GenericRecursiveOracle oracle(L, {0, 1}, {}, nullptr);
    for (Int a : {0, 1, 2}) {
        IVec A{a, 1, 0, 0};
        QVec t = negated(L.dual_basis(1));
        INFO("a = " << a);
        CHECK(brute::nested_eval(L, spec.get(), A, t, b) == oracle.evaluate(A, t));
        CHECK(brute::nested_eval(L, spec.get(), A, QVec(4, Rat(0)), b) ==
              oracle.evaluate(A, QVec(4, Rat(0))));
    }
}

TEST_CASE("brute relative computation matches the tower evaluator") {
    Lattice L(graph_a2());
    std::vector<std::vector<int>> layers{{0}, {1}};
    QVec lp = negated(added(L.dual_basis(0), L.dual_basis(1)));
    IVec Z{2, 2};
    auto fast = relgen_natural(L, Z, lp, layers, 2);
    brute::Budget b;
    auto spec = brute::nested_prefix(layers, 2);
    auto slow = brute::relative(L, Z, lp, spec.get(), b);
    CHECK(fast.h1 == slow.h1);
    CHECK(fast.argmin == slow.argmin);
    CHECK(fast.h0reg_nonempty == slow.dominant);
    CHECK(fast.dominance.margin == slow.margin);
}

TEST_CASE("non-integer brute values are internal errors") {
    CHECK_THROWS_AS(brute::rat_to_int_brute(rat_from_string("1/2")), InternalError);
    CHECK(brute::rat_to_int_brute(rat_from_string("-3")) == -3);
}
