#include "padicsum/lct.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>

#include "padicsum/error.hpp"
#include "padicsum/expsum.hpp"

namespace padicsum {

Rational lct_from_resolution(const ResolutionData& data, const std::function<bool(const Component&)>& keep) {
    data.validate();
    std::optional<Rational> best;
    for (const auto& c : data.components) {
        if (!keep(c)) continue;
        const Rational r(Integer(c.nu), Integer(c.N));
        if (!best || r < *best) best = r;
    }
    if (!best) throw DataError("components", "no component passes the fiber filter");
    return *best;
}

std::uint64_t contact_count(const Polynomial& f, const PadicLevel& level, const ResidueBox& box,
                            const HistogramOptions& options) {
    return contact_counts(build_histogram(f, level, box, options)).b_count;
}

double sigma_of(double lct) {
    return std::min(lct, 0.5);
}

Rational sigma_of(const Rational& lct) {
    return std::min(lct, Rational(1, 2));
}

LctEstimate lct_jet_estimate(const Polynomial& f, const std::vector<std::uint64_t>& primes, unsigned m_max,
                             const ResidueBox& box, const HistogramOptions& options) {
    require_nonconstant(f);
    const std::set<std::uint64_t> distinct(primes.begin(), primes.end());
    if (distinct.size() < 2) throw UsageError("at least two distinct primes are needed to fit a slope");
    if (m_max < 1) throw UsageError("m_max must be >= 1");
    const double n = static_cast<double>(f.nvars());

    LctEstimate est;
    for (unsigned m = 1; m <= m_max; ++m) {
        LevelFit fit{m, {}, 0, 0, 0, 0, 0};
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::uint64_t p : distinct) {
            const std::uint64_t count = contact_count(f, PadicLevel(p, m), box, options);
            if (count == 0) {
                throw UsageError("f has no contact points on the box at p = " + std::to_string(p) +
                                 ", m = " + std::to_string(m));
            }
            const double x = std::log(static_cast<double>(p));
            const double y = std::log(static_cast<double>(count));
            fit.rows.push_back({p, count, y / x});
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double k = static_cast<double>(fit.rows.size());
        fit.dim_fit = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        fit.intercept = (sy - fit.dim_fit * sx) / k;
        double ss = 0;
        for (const auto& row : fit.rows) {
            const double x = std::log(static_cast<double>(row.p));
            const double r = std::log(static_cast<double>(row.count)) - (fit.intercept + fit.dim_fit * x);
            ss += r * r;
        }
        fit.residual = std::sqrt(ss / k);
        fit.codim = m * n - fit.dim_fit;
        fit.ratio = fit.codim / m;
        if (est.per_m.empty() || fit.ratio < est.inf_value) {
            est.inf_value = fit.ratio;
            est.argmin_m = m;
        }
        est.per_m.push_back(std::move(fit));
    }
    est.min_at_mmax = est.argmin_m == m_max;
    return est;
}

void write_lct_csv(std::ostream& out, const LctEstimate& estimate) {
    out << "m,p,count,log_p_count,dim_fit,codim,codim_over_m\n";
    const auto flags = out.flags();
    out << std::setprecision(12);
    for (const auto& fit : estimate.per_m) {
        for (const auto& row : fit.rows) {
            out << fit.m << ',' << row.p << ',' << row.count << ',' << row.log_p_count << ',' << fit.dim_fit << ','
                << fit.codim << ',' << fit.ratio << '\n';
        }
    }
    out.flags(flags);
}

}  // namespace padicsum
