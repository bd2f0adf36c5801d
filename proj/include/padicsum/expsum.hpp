#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "padicsum/histogram.hpp"

namespace padicsum {

struct ExpSumValue {
    std::complex<double> value;
    double magnitude = 0.0;

    static ExpSumValue from(std::complex<double> z) { return {z, std::abs(z)}; }
};

// p^{-mn} sum_r count(r) exp(2 pi i r / p^m). The normalizer is p^{mn} for
// both box kinds, so the origin box at m = 1 gives exactly p^{-n}.
ExpSumValue exp_sum(const ValueHistogram& hist);

// Same sum restricted to residues accepted by `keep`.
ExpSumValue partial_exp_sum(const ValueHistogram& hist, const std::function<bool(std::uint64_t)>& keep);

// Partial sums over ord_p f(x) <= m-2, == m-1 and >= m.
struct SubsumTriple {
    ExpSumValue low;
    ExpSumValue mid;
    ExpSumValue high;
    ExpSumValue total;
};

SubsumTriple subsum_decomposition(const ValueHistogram& hist);  // m >= 2

struct LiftWitness {
    std::uint64_t residue;                   // class z mod p^{m-1}
    std::vector<std::uint64_t> lift_counts;  // counts of z + k p^{m-1}, k = 0..p-1
};

struct LiftConstancyReport {
    bool holds = true;
    std::vector<LiftWitness> witnesses;  // every class whose lifts have unequal counts
    ExpSumValue low;                     // the ord <= m-2 subsum, for comparison
};

// Exact lift-count test on every class z mod p^{m-1} with ord_p z <= m-2.
// Requires m >= 3.
LiftConstancyReport lift_constancy_check(const ValueHistogram& hist);

struct OrbitViolation {
    unsigned orbit;
    std::uint64_t angular;  // a with z = a p^{m-1}
    std::uint64_t count;
    std::uint64_t expected;
};

struct OrbitReport {
    unsigned d = 1;                             // gcd(m-1, p-1)
    bool holds = true;
    std::vector<std::vector<std::uint64_t>> orbits;  // angular components a in each Y_i
    std::vector<std::uint64_t> constants;       // G_i as raw counts; valid when holds
    std::vector<OrbitViolation> violations;
    std::optional<ExpSumValue> mid_from_orbits; // sum_i G_i p^{-mn} sum_{a in Y_i} e(a/p)
    ExpSumValue mid_direct;
};

// Residues z = a p^{m-1}, a in [1,p), are grouped by the class of a^{(p-1)/d};
// orbit i holds a = g^k with k = i mod d for the smallest primitive root g.
// Requires m >= 2 and a shifted box whose base point is 0 mod p.
OrbitReport orbit_constancy_check(const ValueHistogram& hist);

struct ContactCounts {
    std::uint64_t a_count = 0;  // ord_p f(x) == m-1
    std::uint64_t b_count = 0;  // f(x) == 0 mod p^m
};

ContactCounts contact_counts(const ValueHistogram& hist);

}  // namespace padicsum
