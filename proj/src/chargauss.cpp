#include "padicsum/chargauss.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "padicsum/arith.hpp"
#include "padicsum/error.hpp"

namespace padicsum {

namespace {

constexpr std::uint64_t kMaxTablePrime = std::uint64_t{1} << 28U;

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        out.push_back(q);
        while (n % q == 0) n /= q;
    }
    if (n > 1) out.push_back(n);
    return out;
}

void require_prime(std::uint64_t p) {
    if (!is_prime(p)) throw UsageError("p = " + std::to_string(p) + " is not prime");
}

}  // namespace

std::uint64_t primitive_root(std::uint64_t p) {
    require_prime(p);
    if (p == 2) return 1;
    const auto factors = prime_factors(p - 1);
    for (std::uint64_t g = 2;; ++g) {
        bool generates = true;
        for (auto q : factors) {
            if (powmod(g, (p - 1) / q, p) == 1) {
                generates = false;
                break;
            }
        }
        if (generates) return g;
    }
}

CharacterTable::CharacterTable(std::uint64_t p) : p_(p), g_(primitive_root(p)) {
    if (p > kMaxTablePrime) throw UsageError("character tables are limited to p < 2^28");
    log_.assign(p, 0);
    std::uint64_t x = 1;
    for (std::uint64_t k = 0; k + 1 < p; ++k) {
        log_[x] = static_cast<std::uint32_t>(k);
        x = mulmod(x, g_, p);
    }
}

std::uint64_t CharacterTable::discrete_log(std::uint64_t u) const {
    u %= p_;
    if (u == 0) throw UsageError("discrete log of 0");
    return log_[u];
}

MultChar::MultChar(std::uint64_t p, CharLabel label)
    : MultChar(std::make_shared<const CharacterTable>(p), label) {}

MultChar::MultChar(std::shared_ptr<const CharacterTable> table, CharLabel label)
    : table_(std::move(table)), label_(label) {
    const std::uint64_t p = table_->p();
    if (label_.order == 0 || (p - 1) % label_.order != 0) {
        throw UsageError("character order " + std::to_string(label_.order) + " does not divide p-1 = " +
                         std::to_string(p - 1));
    }
    if (label_.index >= label_.order) throw UsageError("character index must be below its order");
}

std::complex<double> MultChar::operator()(std::uint64_t u) const {
    u %= p();
    if (u == 0) return {0.0, 0.0};
    const std::uint64_t k = table_->discrete_log(u);
    return unit_root(mulmod(label_.index, k % label_.order, label_.order), label_.order);
}

std::complex<double> char_value(const MultChar& chi, std::uint64_t u) {
    return chi(u);
}

std::complex<double> gauss_sum(const MultChar& chi) {
    const std::uint64_t p = chi.p();
    const std::uint64_t d = chi.label().order;
    const std::uint64_t j = chi.label().index;
    // chi(v) e(v/p) = e((j log v * p + v * d) / (d p)) exactly
    const std::uint64_t den = d * p;
    long double re = 0.0L;
    long double im = 0.0L;
    for (std::uint64_t v = 1; v < p; ++v) {
        const std::uint64_t k = chi.table().discrete_log(v);
        const std::uint64_t num = (mulmod(j, k % d, d) * p + v * d) % den;
        const auto z = unit_root(num, den);
        re += z.real();
        im += z.imag();
    }
    const long double scale = 1.0L / static_cast<long double>(p - 1);
    return {static_cast<double>(re * scale), static_cast<double>(im * scale)};
}

std::vector<CharLabel> labels_of_exact_order(unsigned d) {
    if (d == 1) return {{1, 0}};
    std::vector<CharLabel> out;
    for (unsigned j = 1; j < d; ++j) {
        if (std::gcd(j, d) == 1) out.push_back({d, j});
    }
    return out;
}

WeilCheck weil_power_sum_check(std::uint64_t p, unsigned d, std::uint64_t xi) {
    require_prime(p);
    if (d == 0 || (p - 1) % d != 0) {
        throw UsageError("d = " + std::to_string(d) + " does not divide p-1 = " + std::to_string(p - 1));
    }
    if (xi == 0 || xi >= p) throw UsageError("xi must lie in [1, p)");
    long double re = 0.0L;
    long double im = 0.0L;
    for (std::uint64_t u = 1; u < p; ++u) {
        const auto z = unit_root(mulmod(powmod(u, d, p), xi, p), p);
        re += z.real();
        im += z.imag();
    }
    WeilCheck out;
    out.sum_magnitude = static_cast<double>(std::hypot(re, im));
    out.bound = (d - 1) * std::sqrt(static_cast<double>(p)) + 1.0;
    out.ok = out.sum_magnitude <= out.bound + 1e-9;
    return out;
}

}  // namespace padicsum
