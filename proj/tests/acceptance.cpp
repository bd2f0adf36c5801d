// Acceptance run: one PASS/FAIL line per criterion. Each criterion renders a
// text report; criterion 10 renders all of them at 1 and at k threads and
// compares the bytes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "padicsum/chargauss.hpp"
#include "padicsum/critical.hpp"
#include "padicsum/expsum.hpp"
#include "padicsum/harness.hpp"
#include "padicsum/histogram.hpp"
#include "padicsum/lct.hpp"
#include "padicsum/zeta.hpp"

using namespace padicsum;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
    std::string report;  // full deterministic rendering
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cnum(std::complex<double> z) {
    return num(z.real()) + "," + num(z.imag());
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = lo; p <= hi; ++p)
        if (is_prime(p)) out.push_back(p);
    return out;
}

HistogramOptions with_threads(unsigned threads) {
    HistogramOptions o;
    o.threads = threads;
    return o;
}

std::string data_path(const std::string& name) {
    return std::string(PADICSUM_DATA_DIR) + "/" + name + ".json";
}

struct Fixture {
    const char* text;
    std::size_t nvars;
};

const std::vector<Fixture> kFixtures = {
    {"x", 1}, {"x^2", 1}, {"x^4", 1}, {"x^2+y^3", 2}, {"x^3-3*x", 1}, {"x^2*y^2", 2}, {"x^2-y^2", 2},
};

Outcome criterion1(unsigned threads) {
    Outcome out;
    std::ostringstream rep;
    std::size_t checked = 0;
    for (const auto& fx : kFixtures) {
        const auto f = parse_polynomial(fx.text, fx.nvars);
        for (auto p : primes_in(2, 37)) {
            const auto hist = build_histogram(f, PadicLevel(p, 1), ResidueBox::origin(fx.nvars), with_threads(threads));
            const auto v = exp_sum(hist);
            const bool exact = hist.entries() == std::vector<ValueHistogram::Entry>{{0, 1}};
            const double target = std::pow(static_cast<double>(p), -static_cast<double>(fx.nvars));
            const bool ok = exact && std::abs(v.magnitude - target) <= 1e-15 * target;
            out.pass &= ok;
            ++checked;
            rep << fx.text << " p=" << p << " |E|=" << num(v.magnitude) << (ok ? " ok" : " FAIL") << '\n';
        }
    }
    out.summary = std::to_string(checked) + " (f, p) pairs";
    out.report = rep.str();
    return out;
}

const std::vector<Fixture> kLemmaFixtures = {{"x^2", 1}, {"x^2+y^3", 2}, {"x^2-y^2", 2}};

Outcome criterion2(unsigned threads) {
    Outcome out;
    std::ostringstream rep;
    std::uint64_t last_failure = 0;
    double worst_low = 0.0;
    for (const auto& fx : kLemmaFixtures) {
        const auto f = parse_polynomial(fx.text, fx.nvars);
        for (auto p : primes_in(5, 37)) {
            for (unsigned m : {3u, 4u}) {
                const auto hist = build_histogram(f, PadicLevel(p, m), ResidueBox::origin(fx.nvars), with_threads(threads));
                const auto r = lift_constancy_check(hist);
                const bool ok = r.holds && r.low.magnitude <= 1e-9;
                if (!ok) last_failure = std::max(last_failure, p);
                if (r.holds) worst_low = std::max(worst_low, r.low.magnitude);
                out.pass &= ok;
                rep << fx.text << " p=" << p << " m=" << m << " holds=" << r.holds
                    << " witnesses=" << r.witnesses.size() << " |low|=" << num(r.low.magnitude) << '\n';
            }
        }
    }
    out.summary = "max |low| " + num(worst_low) +
                  (last_failure ? ", failures up to p=" + std::to_string(last_failure) : ", no failures");
    out.report = rep.str();
    return out;
}

Outcome criterion3(unsigned threads) {
    Outcome out;
    std::ostringstream rep;
    double worst = 0.0;
    for (const auto& fx : kLemmaFixtures) {
        const auto f = parse_polynomial(fx.text, fx.nvars);
        for (auto p : primes_in(5, 37)) {
            for (unsigned m : {3u, 4u}) {
                const auto hist = build_histogram(f, PadicLevel(p, m), ResidueBox::origin(fx.nvars), with_threads(threads));
                const auto r = orbit_constancy_check(hist);
                const bool d_ok = r.d == gcd_u64(m - 1, p - 1) && r.orbits.size() == r.d;
                double err = INFINITY;
                if (r.mid_from_orbits) err = std::abs(r.mid_from_orbits->value - r.mid_direct.value);
                const bool ok = r.holds && d_ok && err <= 1e-9;
                worst = std::max(worst, err);
                out.pass &= ok;
                rep << fx.text << " p=" << p << " m=" << m << " d=" << r.d << " holds=" << r.holds
                    << " mid_err=" << num(err) << '\n';
            }
        }
    }
    out.summary = "max mid error " + num(worst);
    out.report = rep.str();
    return out;
}

Outcome criterion4(unsigned) {
    Outcome out;
    std::ostringstream rep;
    std::size_t checked = 0;
    double tightest = 0.0;
    for (auto p : primes_in(3, 199)) {
        for (unsigned d = 1; d <= 12; ++d) {
            if ((p - 1) % d != 0) continue;
            const double bound = (d - 1) * std::sqrt(static_cast<double>(p)) + 1.0;
            double worst = 0.0;
            for (std::uint64_t xi = 1; xi < p; ++xi) {
                const auto c = weil_power_sum_check(p, d, xi);
                worst = std::max(worst, c.sum_magnitude);
                ++checked;
            }
            const bool ok = worst <= bound + 1e-9;
            tightest = std::max(tightest, worst / bound);
            out.pass &= ok;
            rep << "p=" << p << " d=" << d << " max=" << num(worst) << " bound=" << num(bound) << '\n';
        }
    }
    out.summary = std::to_string(checked) + " sums, max |S|/bound " + num(tightest);
    out.report = rep.str();
    return out;
}

Outcome criterion5(unsigned threads) {
    Outcome out;
    std::ostringstream rep;
    double worst = 0.0;
    struct Case {
        const char* poly;
        const char* file;
        bool origin;
    };
    const std::vector<Case> cases = {
        {"x", "x_full", false}, {"x", "x_origin", true}, {"x^2", "x2_full", false}, {"x^2", "x2_origin", true}};
    bool coeffs_equal = true;
    for (const auto& c : cases) {
        const auto data = load_resolution(data_path(c.file));
        const auto f = parse_polynomial(c.poly, 1);
        const auto box = c.origin ? ResidueBox::origin(1) : ResidueBox::full();
        for (std::uint64_t p : {5, 7, 11, 13}) {
            for (unsigned m = 2; m <= 6; ++m) {
                const auto direct = exp_sum(build_histogram(f, PadicLevel(p, m), box, with_threads(threads)));
                const auto recon = reconstruct_exp_sum(data, p, m, 1);
                const double err = std::abs(direct.value - recon);
                worst = std::max(worst, err);
                out.pass &= err <= 1e-9;
                rep << c.file << " p=" << p << " m=" << m << " direct=" << cnum(direct.value)
                    << " reconstructed=" << cnum(recon) << '\n';
            }
            std::vector<CharLabel> labels{{1, 0}};
            for (auto l : required_characters(data, p)) labels.push_back(l);
            for (auto chi : labels) {
                const auto rf = denef_zeta(data, p, chi);
                for (unsigned k = 0; k <= 60; ++k) {
                    if (coeff_series(rf, k) != coeff_lattice(data, p, chi, k)) {
                        coeffs_equal = false;
                        rep << c.file << " p=" << p << " chi=" << chi.order << ":" << chi.index << " k=" << k
                            << " coefficient mismatch\n";
                    }
                }
            }
        }
    }
    out.pass &= coeffs_equal;
    out.summary = "max |E - reconstructed| " + num(worst) + (coeffs_equal ? ", series == lattice for k <= 60" : ", coefficient mismatch");
    out.report = rep.str();
    return out;
}

Outcome criterion6(unsigned) {
    Outcome out;
    std::ostringstream rep;
    double worst = 0.0;
    std::size_t checked = 0;
    for (auto p : primes_in(2, 97)) {
        const auto table = std::make_shared<const CharacterTable>(p);
        const double target = std::sqrt(static_cast<double>(p)) / static_cast<double>(p - 1);
        for (unsigned d = 2; d <= p - 1; ++d) {
            if ((p - 1) % d != 0) continue;
            for (auto label : labels_of_exact_order(d)) {
                const double err = std::abs(std::abs(gauss_sum(MultChar(table, label))) - target);
                worst = std::max(worst, err);
                out.pass &= err <= 1e-9;
                ++checked;
            }
        }
        rep << "p=" << p << " ok\n";
    }
    out.summary = std::to_string(checked) + " characters, max error " + num(worst);
    out.report = rep.str();
    return out;
}

Outcome criterion7(unsigned threads) {
    Outcome out;
    std::ostringstream rep;
    struct Case {
        const char* poly;
        std::size_t nvars;
        double exact;
        const char* file;
        Rational exact_q;
    };
    const std::vector<Case> cases = {{"x", 1, 1.0, "x_origin", Rational(1)},
                                     {"x^2", 1, 0.5, "x2_origin", Rational(1, 2)},
                                     {"x^2+y^3", 2, 5.0 / 6.0, "cusp_origin", Rational(5, 6)},
                                     {"x^4", 1, 0.25, "x4_origin", Rational(1, 4)}};
    std::string summary;
    for (const auto& c : cases) {
        const auto f = parse_polynomial(c.poly, c.nvars);
        const auto est = lct_jet_estimate(f, {7, 11, 13, 17}, 6, ResidueBox::origin(c.nvars), with_threads(threads));
        const auto resolved = lct_from_resolution(load_resolution(data_path(c.file)));
        const bool ok = std::abs(est.inf_value - c.exact) <= 0.1 && resolved == c.exact_q;
        out.pass &= ok;
        rep << c.poly << " jet=" << num(est.inf_value) << " argmin_m=" << est.argmin_m
            << " resolution=" << to_string(resolved) << '\n';
        if (!summary.empty()) summary += ", ";
        summary += std::string(c.poly) + " " + num(est.inf_value).substr(0, 6);
    }
    out.summary = summary;
    out.report = rep.str();
    return out;
}

Outcome criterion8(unsigned threads) {
    Outcome out;
    std::ostringstream rep;
    struct Case {
        const char* poly;
        std::size_t nvars;
        double sigma;
    };
    std::string summary;
    for (const auto& c : {Case{"x^4", 1, 0.25}, Case{"x^2*y^2", 2, 0.5}}) {
        const auto f = parse_polynomial(c.poly, c.nvars);
        const auto primes = primes_in(2, 37);
        const std::vector<unsigned> ms{1, 2, 3, 4, 5};
        SweepOptions opts;
        opts.histogram = with_threads(threads);
        const auto first = sweep_and_fit(f, SumVariant::Origin, c.sigma, primes, ms, {}, opts);
        opts.declared_c = 2.0 * first.c_fit;
        const auto second = sweep_and_fit(f, SumVariant::Origin, c.sigma, primes, ms, {}, opts);
        const bool ok = std::isfinite(first.c_fit) && first.no_upward_trend() && second.violations.empty();
        out.pass &= ok;
        for (const auto& row : first.grid)
            rep << c.poly << " p=" << row.p << " m=" << row.m << " ratio=" << num(row.bound_ratio) << '\n';
        rep << c.poly << " c_fit=" << num(first.c_fit) << " top_half=" << num(first.c_fit_top_half)
            << " stable_from=" << first.stable_from << " violations=" << second.violations.size() << '\n';
        if (!summary.empty()) summary += "; ";
        summary += std::string(c.poly) + " C_fit " + num(first.c_fit).substr(0, 6) + " top-half " +
                   num(first.c_fit_top_half).substr(0, 6) + " violations " + std::to_string(second.violations.size());
    }
    out.summary = summary;
    out.report = rep.str();
    return out;
}

Outcome criterion9(unsigned threads) {
    Outcome out;
    std::ostringstream rep;
    const auto f = parse_polynomial("x^3-3*x", 1);
    const std::vector<Integer> values{-2, 2};
    double worst = 0.0;
    for (std::uint64_t p : {7, 11, 13}) {
        for (unsigned m : {2u, 3u}) {
            const auto split = split_exp_sum_by_critical_values(f, PadicLevel(p, m), values, with_threads(threads));
            const auto direct = exp_sum(build_histogram(f, PadicLevel(p, m), ResidueBox::full(), with_threads(threads)));
            std::complex<double> sum = split.remainder.value;
            for (const auto& part : split.parts) sum += part.second.value;
            const double err = std::max({std::abs(sum - direct.value), split.remainder.magnitude, split.identity_error});
            worst = std::max(worst, err);
            out.pass &= err <= 1e-9;
            rep << "p=" << p << " m=" << m << " E=" << cnum(direct.value) << " rest=" << cnum(split.remainder.value)
                << '\n';
        }
    }
    out.summary = "max error " + num(worst);
    out.report = rep.str();
    return out;
}

using Criterion = std::function<Outcome(unsigned)>;

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                             criterion6, criterion7, criterion8, criterion9};
    constexpr unsigned kThreads = 4;
    bool all = true;
    std::vector<std::string> single;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i](1);
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        single.push_back(o.report);
        all &= o.pass;
        std::printf("criterion %zu: %s (%s; %.2fs)\n", i + 1, o.pass ? "PASS" : "FAIL", o.summary.c_str(), secs);
        std::fflush(stdout);
    }

    bool identical = true;
    std::string differing;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string again;
        try {
            again = criteria[i](kThreads).report;
        } catch (const std::exception& e) {
            again = e.what();
        }
        if (again != single[i]) {
            identical = false;
            differing += " " + std::to_string(i + 1);
        }
    }
    all &= identical;
    std::printf("criterion 10: %s (1 vs %u threads, %s)\n", identical ? "PASS" : "FAIL", kThreads,
                identical ? "all reports byte-identical" : ("differing:" + differing).c_str());
    return all ? 0 : 1;
}
