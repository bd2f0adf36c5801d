#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <memory>
#include <vector>

namespace padicsum {

// Smallest positive primitive root mod p; 1 for p = 2.
std::uint64_t primitive_root(std::uint64_t p);

// Discrete logarithms to the base primitive_root(p). Built once per prime.
class CharacterTable {
public:
    explicit CharacterTable(std::uint64_t p);

    std::uint64_t p() const noexcept { return p_; }
    std::uint64_t generator() const noexcept { return g_; }
    // log_g(u) for u in [1, p).
    std::uint64_t discrete_log(std::uint64_t u) const;

private:
    std::uint64_t p_;
    std::uint64_t g_;
    std::vector<std::uint32_t> log_;
};

// (order d, index j): the character with chi(g) = exp(2 pi i j / d).
struct CharLabel {
    unsigned order = 1;
    unsigned index = 0;

    bool is_trivial() const noexcept { return index == 0; }
    CharLabel inverse() const noexcept { return {order, index == 0 ? 0 : order - index}; }
    auto operator<=>(const CharLabel&) const = default;
};

// Multiplicative character of F_p^x of conductor 1, extended by chi(0) = 0.
class MultChar {
public:
    // Throws UsageError unless d divides p - 1 and index < d.
    MultChar(std::uint64_t p, CharLabel label);
    MultChar(std::shared_ptr<const CharacterTable> table, CharLabel label);

    std::uint64_t p() const noexcept { return table_->p(); }
    const CharLabel& label() const noexcept { return label_; }
    const CharacterTable& table() const noexcept { return *table_; }

    std::complex<double> operator()(std::uint64_t u) const;
    MultChar inverse() const { return MultChar(table_, label_.inverse()); }

private:
    std::shared_ptr<const CharacterTable> table_;
    CharLabel label_;
};

std::complex<double> char_value(const MultChar& chi, std::uint64_t u);

// (1/(p-1)) sum_{v=1}^{p-1} chi(v) exp(2 pi i v / p).
std::complex<double> gauss_sum(const MultChar& chi);

// Characters whose exact order is d: indices coprime to d (index 0 when d = 1).
std::vector<CharLabel> labels_of_exact_order(unsigned d);

struct WeilCheck {
    double sum_magnitude = 0.0;
    double bound = 0.0;
    bool ok = false;
};

// |sum_{u in F_p^x} exp(2 pi i u^d xi / p)| against (d-1) sqrt(p) + 1.
// Throws UsageError unless d | p-1 and xi in [1, p).
WeilCheck weil_power_sum_check(std::uint64_t p, unsigned d, std::uint64_t xi);

}  // namespace padicsum
