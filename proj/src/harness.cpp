#include "padicsum/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "padicsum/error.hpp"

namespace padicsum {

namespace {

// Sums this small are rounding noise; residuals are measured absolutely below it.
constexpr double kNegligibleNorm = 1e-9;

}  // namespace

std::string to_string(SumVariant v) {
    switch (v) {
        case SumVariant::Full: return "full";
        case SumVariant::Origin: return "origin";
        case SumVariant::Shifted: return "shifted";
    }
    return "?";
}

SumVariant parse_variant(const std::string& text) {
    if (text == "full") return SumVariant::Full;
    if (text == "origin") return SumVariant::Origin;
    if (text == "shifted") return SumVariant::Shifted;
    throw UsageError("unknown variant '" + text + "' (expected full, origin or shifted)");
}

ResidueBox variant_box(SumVariant v, std::size_t nvars, const std::vector<std::int64_t>& y) {
    switch (v) {
        case SumVariant::Full: return ResidueBox::full();
        case SumVariant::Origin: return ResidueBox::origin(nvars);
        case SumVariant::Shifted:
            if (y.size() != nvars) throw UsageError("the shifted variant needs a base point with one entry per variable");
            return ResidueBox::shifted(y);
    }
    return ResidueBox::full();
}

double bound_ratio(double magnitude, std::uint64_t p, unsigned m, std::size_t n, double sigma) {
    return magnitude * std::pow(static_cast<double>(m), 1.0 - static_cast<double>(n)) *
           std::pow(static_cast<double>(p), static_cast<double>(m) * sigma);
}

BoundReport sweep_and_fit(const Polynomial& f, SumVariant variant, double sigma, const std::vector<std::uint64_t>& primes,
                          const std::vector<unsigned>& ms, const std::vector<std::int64_t>& y,
                          const SweepOptions& options) {
    require_nonconstant(f);
    if (primes.empty() || ms.empty()) throw UsageError("the sweep grid is empty");
    if (!(sigma >= 0.0)) throw UsageError("sigma must be non-negative");
    std::vector<std::uint64_t> ps(primes);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<unsigned> levels(ms);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.front() == 0) throw UsageError("m must be >= 1");

    const ResidueBox box = variant_box(variant, f.nvars(), y);
    BoundReport report;
    report.polynomial = to_string(f);
    report.variant = variant;
    report.sigma = sigma;
    report.declared_c = options.declared_c;
    std::map<std::uint64_t, double> per_prime;
    for (std::uint64_t p : ps) {
        for (unsigned m : levels) {
            if (variant == SumVariant::Full && m < 2) continue;
            const PadicLevel level(p, m);
            const auto value = exp_sum(build_histogram(f, level, box, options.histogram));
            BoundRow row{p, m, value.value, value.magnitude, bound_ratio(value.magnitude, p, m, f.nvars(), sigma), {}};
            if (options.resolution && m >= 2) {
                row.reconstructed = reconstruct_exp_sum(*options.resolution, p, m, 1);
                report.reconstruction_error = std::max(report.reconstruction_error, std::abs(*row.reconstructed - row.value));
            }
            report.c_fit = std::max(report.c_fit, row.bound_ratio);
            per_prime[p] = std::max(per_prime[p], row.bound_ratio);
            if (options.declared_c && row.bound_ratio > *options.declared_c) report.violations.push_back(row);
            report.grid.push_back(row);
        }
    }
    if (report.grid.empty()) throw UsageError("no admissible (p, m) pairs in the grid");
    const std::size_t top_start = ps.size() / 2;
    for (std::size_t i = top_start; i < ps.size(); ++i) report.c_fit_top_half = std::max(report.c_fit_top_half, per_prime[ps[i]]);
    report.c_fit_largest_prime = per_prime[ps.back()];
    report.stable_from = ps.back();
    double tail = 0.0;
    for (std::size_t i = ps.size(); i-- > 0;) {
        tail = std::max(tail, per_prime[ps[i]]);
        if (tail <= 1.05 * report.c_fit_largest_prime) report.stable_from = ps[i];
        else break;
    }
    return report;
}

ModelFit fit_asymptotic_model(const std::vector<std::pair<unsigned, std::complex<double>>>& values, std::uint64_t p,
                         const std::vector<Candidate>& candidates, unsigned period) {
    if (candidates.empty()) throw UsageError("no candidate exponents supplied");
    if (period == 0) throw UsageError("period must be positive");
    for (const auto& c : candidates) {
        if (!std::isfinite(c.lambda)) throw UsageError("candidate exponent is not finite");
    }
    ModelFit fit;
    fit.period = period;
    double residual_sq = 0.0;
    double norm_sq = 0.0;
    for (unsigned cls = 0; cls < period; ++cls) {
        std::vector<std::pair<unsigned, std::complex<double>>> rows;
        for (const auto& v : values) {
            if (v.first % period == cls) rows.push_back(v);
        }
        if (rows.size() < candidates.size()) {
            throw UsageError("underdetermined fit: residue class " + std::to_string(cls) + " has " +
                             std::to_string(rows.size()) + " values for " + std::to_string(candidates.size()) +
                             " candidates");
        }
        Eigen::MatrixXcd a(rows.size(), candidates.size());
        Eigen::VectorXcd b(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double m = rows[r].first;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                a(r, c) = std::pow(m, candidates[c].beta) * std::pow(static_cast<double>(p), -candidates[c].lambda * m);
            }
            b(r) = rows[r].second;
        }
        const Eigen::VectorXcd x = a.colPivHouseholderQr().solve(b);
        residual_sq += (a * x - b).squaredNorm();
        norm_sq += b.squaredNorm();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            fit.terms.push_back({candidates[c].lambda, candidates[c].beta, cls, x(c)});
        }
    }
    fit.residual = std::sqrt(residual_sq);
    fit.relative_residual = fit.residual / std::max(std::sqrt(norm_sq), kNegligibleNorm);
    fit.flagged = fit.relative_residual > 1e-6;
    return fit;
}

ModelFit fit_asymptotic_model(const Polynomial& f, SumVariant variant, std::uint64_t p, const std::vector<unsigned>& ms,
                         const std::vector<Candidate>& candidates, unsigned period, const std::vector<std::int64_t>& y,
                         const HistogramOptions& options) {
    require_nonconstant(f);
    const ResidueBox box = variant_box(variant, f.nvars(), y);
    std::vector<std::pair<unsigned, std::complex<double>>> values;
    for (unsigned m : ms) {
        if (m == 0) throw UsageError("m must be >= 1");
        values.emplace_back(m, exp_sum(build_histogram(f, PadicLevel(p, m), box, options)).value);
    }
    return fit_asymptotic_model(values, p, candidates, period);
}

}  // namespace padicsum
