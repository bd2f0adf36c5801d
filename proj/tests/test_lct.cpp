#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "padicsum/error.hpp"
#include "padicsum/expsum.hpp"
#include "padicsum/lct.hpp"

using namespace padicsum;

TEST_CASE("lct from resolution data") {
    CHECK(lct_from_resolution(fixture("x2_full")) == Rational(1, 2));
    CHECK(lct_from_resolution(fixture("x_full")) == 1);
    CHECK(lct_from_resolution(fixture("x4_origin")) == Rational(1, 4));
    CHECK(lct_from_resolution(fixture("cusp_origin")) == Rational(5, 6));

    ResolutionData d;
    d.components = {{1, 2, 1, {}}, {2, 3, 2, {}}, {3, 1, 1, {}}};
    CHECK(lct_from_resolution(d) == Rational(1, 2));
    d.components[0].meets_origin = false;
    CHECK(lct_from_resolution(d) == Rational(2, 3));
    CHECK_THROWS_AS(lct_from_resolution(d, [](const Component&) { return false; }), DataError);
}

TEST_CASE("sigma") {
    CHECK(sigma_of(Rational(5, 6)) == Rational(1, 2));
    CHECK(sigma_of(Rational(1, 4)) == Rational(1, 4));
    CHECK(sigma_of(Rational(1, 2)) == Rational(1, 2));
    CHECK(sigma_of(0.3) == doctest::Approx(0.3));
}

TEST_CASE("contact counts on the origin box") {
    CHECK(contact_count(parse_polynomial("x", 1), PadicLevel(7, 4), ResidueBox::origin(1)) == 1);
    CHECK(contact_count(parse_polynomial("x^2", 1), PadicLevel(5, 2), ResidueBox::origin(1)) == 5);
    CHECK(contact_count(parse_polynomial("x^2", 1), PadicLevel(5, 3), ResidueBox::origin(1)) == 5);
}

TEST_CASE("property: monomial contact counts are p^(m - ceil(m/k))") {
    for (unsigned k = 1; k <= 5; ++k) {
        const auto f = parse_polynomial("x^" + std::to_string(k), 1);
        for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
            for (unsigned m = 1; m <= 6; ++m) {
                const unsigned e = m - (m + k - 1) / k;
                CHECK(contact_count(f, PadicLevel(p, m), ResidueBox::origin(1)) == *checked_pow(p, e));
            }
        }
    }
}

TEST_CASE("property: contact counts grow by at most p^n per level") {
    for (const char* poly : {"x^2+y^3", "x^2*y^2", "x^2-y^2", "x*y+y^4"}) {
        const auto f = parse_polynomial(poly, 2);
        for (std::uint64_t p : {3, 5, 7}) {
            for (unsigned m = 1; m <= 5; ++m) {
                const auto lo = contact_count(f, PadicLevel(p, m), ResidueBox::origin(2));
                const auto hi = contact_count(f, PadicLevel(p, m + 1), ResidueBox::origin(2));
                CHECK(hi <= p * p * lo);
            }
        }
    }
}

TEST_CASE("jet estimates") {
    const std::vector<std::uint64_t> primes{5, 7, 11, 13};
    auto est = lct_jet_estimate(parse_polynomial("x", 1), primes, 4, ResidueBox::origin(1));
    CHECK(est.inf_value == doctest::Approx(1.0).epsilon(0.05));
    est = lct_jet_estimate(parse_polynomial("x^2", 1), primes, 6, ResidueBox::origin(1));
    CHECK(est.inf_value >= 0.45);
    CHECK(est.inf_value <= 0.55);
    est = lct_jet_estimate(parse_polynomial("x^2+y^3", 2), {7, 11, 13}, 6, ResidueBox::origin(2));
    CHECK(std::abs(est.inf_value - 5.0 / 6) <= 0.1);
    CHECK(est.argmin_m == 6);
    CHECK(est.min_at_mmax);

    CHECK_THROWS_AS(lct_jet_estimate(parse_polynomial("x", 1), {5}, 3, ResidueBox::origin(1)), UsageError);
    CHECK_THROWS_AS(lct_jet_estimate(parse_polynomial("x", 1), {5, 5}, 3, ResidueBox::origin(1)), UsageError);
    CHECK_THROWS_AS(lct_jet_estimate(parse_polynomial("x+1", 1), {5, 7}, 3, ResidueBox::origin(1)), UsageError);
}

TEST_CASE("jet estimate csv") {
    const auto est = lct_jet_estimate(parse_polynomial("x^2", 1), {5, 7}, 2, ResidueBox::origin(1));
    std::ostringstream out;
    write_lct_csv(out, est);
    CHECK(out.str() ==
          "m,p,count,log_p_count,dim_fit,codim,codim_over_m\n"
          "1,5,1,0,0,1,1\n"
          "1,7,1,0,0,1,1\n"
          "2,5,5,1,1,1,0.5\n"
          "2,7,7,1,1,1,0.5\n");
}

TEST_CASE("dimension inequality for the ord = m-1 stratum") {
    // m n - dim(A_{p,m}) >= (m - 1) lct, up to fit slack
    struct Case {
        const char* poly;
        std::size_t n;
        double lct;
    };
    for (const Case c : {Case{"x^2", 1, 0.5}, Case{"x^2+y^3", 2, 5.0 / 6}, Case{"x^4", 1, 0.25}}) {
        const auto f = parse_polynomial(c.poly, c.n);
        for (unsigned m = 2; m <= 5; ++m) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            int k = 0;
            for (std::uint64_t p : {7, 11, 13}) {
                const auto a = contact_counts(build_histogram(f, PadicLevel(p, m), ResidueBox::origin(c.n))).a_count;
                if (a == 0) continue;
                const double x = std::log(double(p)), y = std::log(double(a));
                sx += x, sy += y, sxx += x * x, sxy += x * y, ++k;
            }
            if (k < 2) continue;
            const double dim = (k * sxy - sx * sy) / (k * sxx - sx * sx);
            CHECK(m * c.n - dim >= (m - 1) * c.lct - 0.15);
        }
    }
}
