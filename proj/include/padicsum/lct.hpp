#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "padicsum/histogram.hpp"
#include "padicsum/zeta.hpp"

namespace padicsum {

// min nu_i / N_i over components accepted by `keep` (default: meets_origin).
Rational lct_from_resolution(const ResolutionData& data,
                             const std::function<bool(const Component&)>& keep = &Component::at_origin);

// #{x in box : f(x) == 0 mod p^m}
std::uint64_t contact_count(const Polynomial& f, const PadicLevel& level, const ResidueBox& box,
                            const HistogramOptions& options = {});

double sigma_of(double lct);
Rational sigma_of(const Rational& lct);

struct ContactRow {
    std::uint64_t p;
    std::uint64_t count;
    double log_p_count;  // log(count) / log(p)
};

struct LevelFit {
    unsigned m;
    std::vector<ContactRow> rows;
    double dim_fit;   // least-squares slope of log count against log p
    double intercept;
    double residual;  // root mean square of the fit residuals
    double codim;     // m n - dim_fit
    double ratio;     // codim / m
};

struct LctEstimate {
    std::vector<LevelFit> per_m;
    double inf_value = 0.0;
    unsigned argmin_m = 0;
    bool min_at_mmax = false;  // the infimum may not be attained in range
    std::optional<Rational> resolution_value;
};

// Throws UsageError with fewer than two distinct primes or when f has no
// contact points on the box at some level.
LctEstimate lct_jet_estimate(const Polynomial& f, const std::vector<std::uint64_t>& primes, unsigned m_max,
                             const ResidueBox& box, const HistogramOptions& options = {});

// Columns: m,p,count,log_p_count,dim_fit,codim,codim_over_m
void write_lct_csv(std::ostream& out, const LctEstimate& estimate);

}  // namespace padicsum
