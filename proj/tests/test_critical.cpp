#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "padicsum/critical.hpp"
#include "padicsum/error.hpp"

using namespace padicsum;

TEST_CASE("critical data mod p") {
    const auto f = parse_polynomial("x^3 - 3*x", 1);
    const auto r = critical_data_mod_p(f, 7, {Integer(-2), Integer(2)});
    CHECK(r.crit_points == std::vector<std::vector<std::uint64_t>>{{1}, {6}});
    CHECK(r.crit_values == std::vector<std::uint64_t>{2, 5});
    CHECK(r.units);
    CHECK(r.distinct);
    CHECK(r.smooth_elsewhere);

    const auto lin = critical_data_mod_p(parse_polynomial("x", 1), 5, {});
    CHECK(lin.crit_points.empty());
    CHECK(lin.crit_values.empty());
    CHECK(lin.smooth_elsewhere);

    const auto sq = critical_data_mod_p(parse_polynomial("x^2", 1), 5, {Integer(0)});
    CHECK_FALSE(sq.units);
    CHECK(sq.smooth_elsewhere);

    // p = 2: both critical values collapse to the same class
    const auto small = critical_data_mod_p(f, 2, {Integer(-2), Integer(2)});
    CHECK_FALSE(small.distinct);

    // a missing critical value breaks condition (3)
    CHECK_FALSE(critical_data_mod_p(f, 7, {Integer(2)}).smooth_elsewhere);
    CHECK_THROWS_AS(critical_data_mod_p(parse_polynomial("x*y*z", 3), 101, {}, 1000), BudgetError);
}

TEST_CASE("integer critical values") {
    CHECK(find_integer_critical_values(parse_polynomial("x^3 - 3*x", 1), 10) == std::vector<Integer>{-2, 2});
    CHECK(find_integer_critical_values(parse_polynomial("x", 1), 10).empty());
    CHECK(find_integer_critical_values(parse_polynomial("x^2 + y^2 - 2*x", 2), 5) == std::vector<Integer>{-1});
}

TEST_CASE("critical value split") {
    const auto f = parse_polynomial("x^3 - 3*x", 1);
    for (std::uint64_t p : {7, 11, 13}) {
        for (unsigned m : {2U, 3U}) {
            const auto split = split_exp_sum_by_critical_values(f, PadicLevel(p, m), {Integer(-2), Integer(2)});
            CHECK(split.parts.size() == 2);
            CHECK(split.identity_error < 1e-9);
            CHECK(split.remainder.magnitude < 1e-9);
            CHECK(std::abs(split.total.value - oracle::naive_sum(f, p, m, true)) < 1e-9);
        }
    }
    const auto lone = split_exp_sum_by_critical_values(parse_polynomial("x", 1), PadicLevel(5, 2), {});
    CHECK(lone.parts.empty());
    CHECK(std::abs(lone.remainder.value - lone.total.value) < 1e-15);
    CHECK_THROWS_AS(split_exp_sum_by_critical_values(f, PadicLevel(2, 2), {Integer(-2), Integer(2)}), UsageError);
    CHECK_THROWS_AS(split_exp_sum_by_critical_values(f, PadicLevel(7, 1), {Integer(2)}), UsageError);
}

TEST_CASE("property: the partition identity holds for random polynomials") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const auto f = oracle::random_polynomial(rng, 1 + trial % 2, 4, 4, 15);
        const std::uint64_t p = trial % 2 ? 5 : 7;
        const auto crit = critical_data_mod_p(f, p, {});
        std::vector<Integer> values(crit.crit_values.begin(), crit.crit_values.end());
        const auto split = split_exp_sum_by_critical_values(f, PadicLevel(p, 2), values);
        CHECK(split.identity_error < 1e-9);
        // away from the critical values mod p every fiber is smooth, so that part vanishes
        CHECK(split.remainder.magnitude < 1e-9);
    }
}
