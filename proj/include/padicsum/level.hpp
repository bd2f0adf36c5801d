#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padicsum/arith.hpp"

namespace padicsum {

// The ring Z/p^m Z together with the additive character exp(2 pi i . / p^m).
class PadicLevel {
public:
    // Throws UsageError unless p is prime and m >= 1.
    PadicLevel(std::uint64_t p, unsigned m);

    std::uint64_t p() const noexcept { return p_; }
    unsigned m() const noexcept { return m_; }
    const Integer& modulus() const noexcept { return modulus_; }

    // p^m when it fits in 63 bits; every enumerating operation requires this.
    std::optional<std::uint64_t> small_modulus() const noexcept { return small_modulus_; }
    std::uint64_t require_small_modulus() const;

    // p^k for k <= m.
    std::uint64_t power(unsigned k) const;

    bool operator==(const PadicLevel& other) const noexcept { return p_ == other.p_ && m_ == other.m_; }

private:
    std::uint64_t p_;
    unsigned m_;
    Integer modulus_;
    std::optional<std::uint64_t> small_modulus_;
};

enum class BoxKind { Full, Shifted };

// (Z/p^m)^n, or ybar + (pZ/p^m Z)^n.
struct ResidueBox {
    BoxKind kind = BoxKind::Full;
    std::vector<std::int64_t> base;  // ignored for Full

    static ResidueBox full() { return {BoxKind::Full, {}}; }
    static ResidueBox shifted(std::vector<std::int64_t> y) { return {BoxKind::Shifted, std::move(y)}; }
    static ResidueBox origin(std::size_t nvars) { return shifted(std::vector<std::int64_t>(nvars, 0)); }

    bool operator==(const ResidueBox&) const = default;
};

std::string to_string(const ResidueBox& box);

// Number of points of the box at the given level, or nullopt on overflow.
std::optional<std::uint64_t> box_cardinality(const PadicLevel& level, const ResidueBox& box, std::size_t nvars);

struct ValuationAc {
    unsigned valuation = 0;                  // == m means "ord >= m"
    std::optional<std::uint64_t> angular;    // in [1, p), absent when valuation == m
};

// Valuation and angular component of a residue z in [0, p^m).
ValuationAc ord_and_ac(std::uint64_t z, const PadicLevel& level);
ValuationAc ord_and_ac(const Integer& z, const PadicLevel& level);

}  // namespace padicsum
