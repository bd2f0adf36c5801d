#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "padicsum/arith.hpp"
#include "padicsum/chargauss.hpp"

namespace padicsum {

struct Component {
    unsigned id = 0;
    unsigned N = 1;   // multiplicity of f o h along E_i
    unsigned nu = 1;  // 1 + multiplicity of the pulled-back volume form
    std::optional<bool> meets_origin;  // absent means true

    bool at_origin() const { return meets_origin.value_or(true); }
    bool operator==(const Component&) const = default;
};

// A stratum count, either a fixed integer or a * p + b.
struct StratumCount {
    CharLabel label;
    std::optional<Integer> value;
    Integer a = 0;
    Integer b = 0;

    Integer at(std::uint64_t p) const { return value ? *value : a * Integer(p) + b; }
    bool operator==(const StratumCount&) const = default;
};

struct Stratum {
    std::vector<unsigned> ids;  // the subset I, ascending
    std::vector<StratumCount> counts;

    bool operator==(const Stratum&) const = default;
};

struct ResolutionData {
    unsigned n = 1;
    std::vector<Component> components;
    std::vector<Stratum> strata;
    std::string phi_label;
    bool good_reduction_regime = true;

    // Structural checks; throws DataError naming the offending field.
    void validate() const;
    // Checks that depend on p: trivial counts non-negative, zero counts where
    // some d does not divide N_i, #I <= n for nonzero counts.
    void validate_at(std::uint64_t p) const;

    const Component& component(unsigned id) const;
    // c_{I,chi} at p; zero when the stratum lists no entry for the label.
    Integer count(const Stratum& s, CharLabel label, std::uint64_t p) const;
    // Whether any stratum lists the label.
    bool supplies(CharLabel label) const;

    bool operator==(const ResolutionData&) const = default;
};

ResolutionData read_resolution(std::istream& in);
ResolutionData load_resolution(const std::string& path);
void write_resolution(std::ostream& out, const ResolutionData& data);

// numerator(t) / prod_k (1 - a_k t^{N_k}) with a_k = p^{-nu_k}, kept factored.
struct RationalFunctionT {
    struct Factor {
        unsigned N;
        unsigned nu;
        Rational a;
        bool operator==(const Factor&) const = default;
    };

    std::vector<Rational> numerator;  // coefficient of t^k at index k
    std::vector<Factor> denominator;  // with repetition

    Rational evaluate(const Rational& t) const;
    unsigned numerator_degree() const;
    unsigned denominator_degree() const;
};

// p^{-n} sum_{I : d | N_i for i in I} c_{I,chi} prod_{i in I} (p-1) t^{N_i} p^{-nu_i} / (1 - t^{N_i} p^{-nu_i})
RationalFunctionT denef_zeta(const ResolutionData& data, std::uint64_t p, CharLabel chi);

// Taylor coefficient of t^k.
Rational coeff_series(const RationalFunctionT& rf, unsigned k);
// sum_{j <= k} coeff_series(rf, j)
Rational coeff_series_cumulative(const RationalFunctionT& rf, unsigned k);

// The same coefficients computed by enumerating (a_i) with sum N_i (a_i + 1) == k (resp. <= k).
Rational coeff_lattice(const ResolutionData& data, std::uint64_t p, CharLabel chi, unsigned k);
Rational coeff_truncated_cumulative(const ResolutionData& data, std::uint64_t p, CharLabel chi, unsigned k);

// Nontrivial labels whose Z_chi can have a nonzero t^k coefficient for k >= 1:
// exact orders d > 1 with d | p - 1 and d | N_i for some component.
std::vector<CharLabel> required_characters(const ResolutionData& data, std::uint64_t p);

// E(u p^{-m}) from the zeta data. Throws DataError when the data is outside the
// good reduction regime or omits a required character.
std::complex<double> reconstruct_exp_sum(const ResolutionData& data, std::uint64_t p, unsigned m, std::uint64_t u);

struct PoleCandidate {
    Rational real_part;      // -nu / N
    unsigned multiplicity;
    bool operator==(const PoleCandidate&) const = default;
};

// Distinct -nu/N over components in strata with a nonzero count at p, with the
// largest number of such components sharing one stratum; -1 always appears.
// Sorted by decreasing real part.
std::vector<PoleCandidate> pole_ledger(const ResolutionData& data, std::uint64_t p);

}  // namespace padicsum
