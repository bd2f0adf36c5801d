#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace padicsum {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Deterministic Miller-Rabin over the full 64-bit range.
bool is_prime(std::uint64_t n);

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    // a, b < m < 2^63
    const std::uint64_t s = a + b;
    return s >= m ? s - m : s;
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// base^exp, or nullopt if the result does not fit in 63 bits.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

// Reduce an arbitrary integer into [0, m).
std::uint64_t reduce_mod(const Integer& value, std::uint64_t m);
Integer reduce_mod(const Integer& value, const Integer& m);

// p-adic valuation of a nonzero integer, capped at `cap`. Zero reports `cap`.
unsigned valuation_capped(std::uint64_t value, std::uint64_t p, unsigned cap);

// exp(2*pi*i * num / den) with num taken modulo den.
std::complex<double> unit_root(std::uint64_t num, std::uint64_t den);

// "num/den" with den > 0, or "num" when den == 1.
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

Rational rational_pow(const Rational& base, unsigned exp);
double to_double(const Rational& q);

}  // namespace padicsum
