#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padicsum/expsum.hpp"
#include "padicsum/histogram.hpp"
#include "padicsum/zeta.hpp"

namespace padicsum {

enum class SumVariant { Full, Origin, Shifted };

std::string to_string(SumVariant v);
SumVariant parse_variant(const std::string& text);  // "full" | "origin" | "shifted"

// The box of a variant; `y` is used by Shifted only.
ResidueBox variant_box(SumVariant v, std::size_t nvars, const std::vector<std::int64_t>& y);

struct BoundRow {
    std::uint64_t p;
    unsigned m;
    std::complex<double> value;
    double magnitude;
    double bound_ratio;  // |E| m^{1-n} p^{m sigma}
    std::optional<std::complex<double>> reconstructed;
};

struct BoundReport {
    std::string polynomial;
    SumVariant variant = SumVariant::Origin;
    double sigma = 0.5;
    std::vector<BoundRow> grid;  // ordered by p, then m
    double c_fit = 0.0;
    double c_fit_top_half = 0.0;        // over the larger half of the primes
    double c_fit_largest_prime = 0.0;
    std::uint64_t stable_from = 0;       // smallest q with C_fit(primes >= q) <= 1.05 C_fit(largest prime)
    std::optional<double> declared_c;
    std::vector<BoundRow> violations;    // rows with bound_ratio > declared C
    double reconstruction_error = 0.0;   // max |E - reconstructed| over rows that have one

    bool no_upward_trend() const { return c_fit_top_half <= 1.05 * c_fit; }
};

struct SweepOptions {
    HistogramOptions histogram;
    std::optional<double> declared_c;
    const ResolutionData* resolution = nullptr;  // enables the reconstruction cross-check
};

double bound_ratio(double magnitude, std::uint64_t p, unsigned m, std::size_t n, double sigma);

// m = 1 rows are skipped for the full variant.
BoundReport sweep_and_fit(const Polynomial& f, SumVariant variant, double sigma, const std::vector<std::uint64_t>& primes,
                          const std::vector<unsigned>& ms, const std::vector<std::int64_t>& y = {},
                          const SweepOptions& options = {});

struct ModelTerm {
    double lambda;
    unsigned beta;
    unsigned residue_class;  // m mod period
    std::complex<double> coefficient;
};

struct ModelFit {
    std::vector<ModelTerm> terms;
    unsigned period = 1;
    double residual = 0.0;           // ||A a - E||_2
    double relative_residual = 0.0;  // residual / max(||E||_2, 1e-9)
    bool flagged = false;            // relative residual above 1e-6
};

struct Candidate {
    double lambda;
    unsigned beta;
};

// Least-squares fit of E(m) against m^beta p^{-lambda m}, separately on each
// residue class of m modulo `period`. Throws UsageError when a class has fewer
// values than candidates.
ModelFit fit_asymptotic_model(const std::vector<std::pair<unsigned, std::complex<double>>>& values, std::uint64_t p,
                         const std::vector<Candidate>& candidates, unsigned period = 1);

ModelFit fit_asymptotic_model(const Polynomial& f, SumVariant variant, std::uint64_t p, const std::vector<unsigned>& ms,
                         const std::vector<Candidate>& candidates, unsigned period = 1,
                         const std::vector<std::int64_t>& y = {}, const HistogramOptions& options = {});

}  // namespace padicsum
