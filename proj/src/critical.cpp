#include "padicsum/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "padicsum/error.hpp"

namespace padicsum {

namespace {

std::vector<Polynomial> gradient(const Polynomial& f) {
    std::vector<Polynomial> out;
    for (std::size_t i = 0; i < f.nvars(); ++i) out.push_back(f.derivative(i));
    return out;
}

std::uint64_t require_points(std::uint64_t side, std::size_t n, std::uint64_t budget) {
    const auto count = checked_pow(side, static_cast<unsigned>(n));
    if (!count || *count > budget) throw BudgetError(count.value_or(std::numeric_limits<std::uint64_t>::max()), budget);
    return *count;
}

}  // namespace

CriticalReport critical_data_mod_p(const Polynomial& f, std::uint64_t p, const std::vector<Integer>& critical_values,
                                   std::uint64_t budget) {
    require_nonconstant(f);
    const PadicLevel level(p, 1);
    const std::size_t n = f.nvars();
    const std::uint64_t total = require_points(p, n, budget);

    const ModularPolynomial fbar(f, p);
    std::vector<ModularPolynomial> partials;
    for (const auto& g : gradient(f)) partials.emplace_back(g, p);

    CriticalReport report;
    report.p = p;
    report.rational_critical_values = critical_values;
    std::vector<std::uint64_t> reduced;
    for (const auto& z : critical_values) reduced.push_back(reduce_mod(z, p));
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        if (reduced[i] == 0) report.units = false;
        for (std::size_t j = 0; j < i; ++j) {
            if (reduced[i] == reduced[j]) report.distinct = false;
        }
    }
    const std::set<std::uint64_t> allowed(reduced.begin(), reduced.end());

    std::set<std::uint64_t> values;
    std::vector<std::uint64_t> x(n, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rest = idx;
        for (std::size_t i = n; i-- > 0;) {
            x[i] = rest % p;
            rest /= p;
        }
        const bool critical = std::all_of(partials.begin(), partials.end(),
                                          [&](const ModularPolynomial& d) { return d.evaluate(x) == 0; });
        if (!critical) continue;
        const std::uint64_t v = fbar.evaluate(x);
        report.crit_points.push_back(x);
        values.insert(v);
        if (!allowed.count(v)) report.smooth_elsewhere = false;
    }
    report.crit_values.assign(values.begin(), values.end());
    return report;
}

std::vector<Integer> find_integer_critical_values(const Polynomial& f, std::int64_t bound, std::uint64_t budget) {
    require_nonconstant(f);
    if (bound < 0) throw UsageError("bound must be non-negative");
    const std::size_t n = f.nvars();
    const std::uint64_t side = static_cast<std::uint64_t>(2 * bound + 1);
    const std::uint64_t total = require_points(side, n, budget);
    const auto grad = gradient(f);
    std::set<Integer> values;
    std::vector<Integer> x(n);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rest = idx;
        for (std::size_t i = n; i-- > 0;) {
            x[i] = Integer(static_cast<std::int64_t>(rest % side) - bound);
            rest /= side;
        }
        const bool critical = std::all_of(grad.begin(), grad.end(), [&](const Polynomial& d) { return d.evaluate(x) == 0; });
        if (critical) values.insert(f.evaluate(x));
    }
    return {values.begin(), values.end()};
}

CriticalSplit split_exp_sum_by_critical_values(const Polynomial& f, const PadicLevel& level,
                                               const std::vector<Integer>& critical_values,
                                               const HistogramOptions& options) {
    if (level.m() < 2) throw UsageError("the critical-value split needs m >= 2");
    const std::uint64_t p = level.p();
    std::vector<std::uint64_t> reduced;
    for (const auto& z : critical_values) {
        const std::uint64_t r = reduce_mod(z, p);
        if (std::find(reduced.begin(), reduced.end(), r) != reduced.end()) {
            throw UsageError("critical values " + z.str() + " and another are congruent mod " + std::to_string(p));
        }
        reduced.push_back(r);
    }
    const auto hist = build_histogram(f, level, ResidueBox::full(), options);
    CriticalSplit split;
    split.total = exp_sum(hist);
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < reduced.size(); ++j) {
        const std::uint64_t target = reduced[j];
        const auto part = partial_exp_sum(hist, [&](std::uint64_t r) { return r % p == target; });
        split.parts.emplace_back(critical_values[j], part);
        acc += part.value;
    }
    split.remainder = partial_exp_sum(hist, [&](std::uint64_t r) {
        return std::find(reduced.begin(), reduced.end(), r % p) == reduced.end();
    });
    acc += split.remainder.value;
    split.identity_error = std::abs(acc - split.total.value);
    return split;
}

}  // namespace padicsum
