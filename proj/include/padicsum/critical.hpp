#pragma once

#include <cstdint>
#include <vector>

#include "padicsum/expsum.hpp"
#include "padicsum/histogram.hpp"

namespace padicsum {

struct CriticalReport {
    std::uint64_t p = 0;
    std::vector<std::vector<std::uint64_t>> crit_points;  // points of F_p^n where every partial vanishes
    std::vector<std::uint64_t> crit_values;               // their values, sorted and distinct
    std::vector<Integer> rational_critical_values;        // the supplied z_j
    bool units = true;             // z_j != 0 mod p for every j
    bool distinct = true;          // z_i != z_j mod p for i != j
    bool smooth_elsewhere = true;  // every critical point mod p has value in {z_j mod p}
};

// Enumerates F_p^n (p^n must fit the budget) and checks the three conditions
// against the supplied critical values.
CriticalReport critical_data_mod_p(const Polynomial& f, std::uint64_t p, const std::vector<Integer>& critical_values,
                                   std::uint64_t budget = kDefaultBudget);

// Distinct values f(x) over integer points |x_i| <= bound where the gradient
// vanishes exactly.
std::vector<Integer> find_integer_critical_values(const Polynomial& f, std::int64_t bound,
                                                  std::uint64_t budget = kDefaultBudget);

struct CriticalSplit {
    std::vector<std::pair<Integer, ExpSumValue>> parts;  // sum over f(x) == z_j mod p
    ExpSumValue remainder;                               // the rest of the box
    ExpSumValue total;
    double identity_error = 0.0;  // |sum parts + remainder - total|
};

// Full-box split of E_{m,p}(f) by the residue of f(x) mod p. Throws UsageError
// if m < 2 or two values are congruent mod p.
CriticalSplit split_exp_sum_by_critical_values(const Polynomial& f, const PadicLevel& level,
                                               const std::vector<Integer>& critical_values,
                                               const HistogramOptions& options = {});

}  // namespace padicsum
