#include "padicsum/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "padicsum/chargauss.hpp"
#include "padicsum/error.hpp"

namespace padicsum {

namespace {

long double normalizer(const ValueHistogram& hist) {
    const auto& level = hist.level();
    return std::pow(static_cast<long double>(level.p()),
                    static_cast<long double>(level.m()) * static_cast<long double>(hist.nvars()));
}

struct Accumulator {
    long double re = 0.0L;
    long double im = 0.0L;

    void add(std::uint64_t count, std::complex<double> z) {
        re += static_cast<long double>(count) * z.real();
        im += static_cast<long double>(count) * z.imag();
    }

    ExpSumValue finish(long double norm) const {
        return ExpSumValue::from({static_cast<double>(re / norm), static_cast<double>(im / norm)});
    }
};

unsigned residue_valuation(std::uint64_t r, const PadicLevel& level) {
    return valuation_capped(r, level.p(), level.m());
}

}  // namespace

ExpSumValue exp_sum(const ValueHistogram& hist) {
    return partial_exp_sum(hist, [](std::uint64_t) { return true; });
}

ExpSumValue partial_exp_sum(const ValueHistogram& hist, const std::function<bool(std::uint64_t)>& keep) {
    const std::uint64_t modulus = hist.level().require_small_modulus();
    Accumulator acc;
    for (const auto& [r, c] : hist.entries()) {
        if (keep(r)) acc.add(c, unit_root(r, modulus));
    }
    return acc.finish(normalizer(hist));
}

SubsumTriple subsum_decomposition(const ValueHistogram& hist) {
    const auto& level = hist.level();
    const unsigned m = level.m();
    if (m < 2) throw UsageError("subsum decomposition needs m >= 2");
    const std::uint64_t modulus = level.require_small_modulus();
    Accumulator low, mid, high, total;
    for (const auto& [r, c] : hist.entries()) {
        const auto z = unit_root(r, modulus);
        const unsigned v = residue_valuation(r, level);
        if (v + 2 <= m) {
            low.add(c, z);
        } else if (v + 1 == m) {
            mid.add(c, z);
        } else {
            high.add(c, z);
        }
        total.add(c, z);
    }
    const long double norm = normalizer(hist);
    return {low.finish(norm), mid.finish(norm), high.finish(norm), total.finish(norm)};
}

LiftConstancyReport lift_constancy_check(const ValueHistogram& hist) {
    const auto& level = hist.level();
    const unsigned m = level.m();
    if (m < 3) throw UsageError("lift-count check needs m >= 3");
    const std::uint64_t p = level.p();
    const std::uint64_t step = level.power(m - 1);

    // classes with no entries at all are trivially constant (all lifts 0)
    std::map<std::uint64_t, std::vector<std::uint64_t>> lifts;
    for (const auto& [r, c] : hist.entries()) {
        const std::uint64_t z = r % step;
        if (z == 0) continue;
        auto& row = lifts[z];
        if (row.empty()) row.assign(p, 0);
        row[r / step] = c;
    }
    LiftConstancyReport report;
    for (auto& [z, counts] : lifts) {
        const bool constant = std::all_of(counts.begin(), counts.end(), [&](std::uint64_t c) { return c == counts[0]; });
        if (!constant) report.witnesses.push_back({z, std::move(counts)});
    }
    report.holds = report.witnesses.empty();
    report.low = partial_exp_sum(hist, [&](std::uint64_t r) { return residue_valuation(r, level) + 2 <= m; });
    return report;
}

OrbitReport orbit_constancy_check(const ValueHistogram& hist) {
    const auto& level = hist.level();
    const unsigned m = level.m();
    if (m < 2) throw UsageError("orbit check needs m >= 2");
    const auto& box = hist.box();
    const std::uint64_t p = level.p();
    const bool origin_like = box.kind == BoxKind::Shifted &&
                             std::all_of(box.base.begin(), box.base.end(), [&](std::int64_t y) {
                                 return ((y % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) %
                                            static_cast<std::int64_t>(p) == 0;
                             });
    if (!origin_like) throw UsageError("orbit check needs a shifted box based at a point of pZ^n");

    const std::uint64_t step = level.power(m - 1);
    OrbitReport report;
    report.d = static_cast<unsigned>(std::gcd<std::uint64_t>(m - 1, p - 1));
    report.orbits.assign(report.d, {});
    const CharacterTable table(p);
    for (std::uint64_t a = 1; a < p; ++a) {
        const std::uint64_t k = p == 2 ? 0 : table.discrete_log(a);
        report.orbits[k % report.d].push_back(a);
    }

    report.constants.assign(report.d, 0);
    for (unsigned i = 0; i < report.d; ++i) {
        const auto& orbit = report.orbits[i];
        report.constants[i] = hist.count(orbit.front() * step);
        for (std::uint64_t a : orbit) {
            const std::uint64_t c = hist.count(a * step);
            if (c != report.constants[i]) report.violations.push_back({i, a, c, report.constants[i]});
        }
    }
    report.holds = report.violations.empty();

    report.mid_direct = partial_exp_sum(hist, [&](std::uint64_t r) { return residue_valuation(r, level) + 1 == m; });
    if (report.holds) {
        const long double norm = normalizer(hist);
        long double re = 0.0L;
        long double im = 0.0L;
        for (unsigned i = 0; i < report.d; ++i) {
            long double sre = 0.0L;
            long double sim = 0.0L;
            for (std::uint64_t a : report.orbits[i]) {
                const auto z = unit_root(a, p);
                sre += z.real();
                sim += z.imag();
            }
            re += static_cast<long double>(report.constants[i]) * sre;
            im += static_cast<long double>(report.constants[i]) * sim;
        }
        report.mid_from_orbits = ExpSumValue::from({static_cast<double>(re / norm), static_cast<double>(im / norm)});
    }
    return report;
}

ContactCounts contact_counts(const ValueHistogram& hist) {
    const auto& level = hist.level();
    ContactCounts out;
    for (const auto& [r, c] : hist.entries()) {
        const unsigned v = residue_valuation(r, level);
        if (v == level.m()) {
            out.b_count += c;
        } else if (v + 1 == level.m()) {
            out.a_count += c;
        }
    }
    return out;
}

}  // namespace padicsum
