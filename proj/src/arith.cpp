#include "padicsum/arith.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "padicsum/error.hpp"

namespace padicsum {

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % small == 0) return n == small;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    // These witnesses are sufficient for every n < 2^64.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp) {
    constexpr std::uint64_t limit = std::uint64_t{1} << 63U;
    std::uint64_t result = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && result > (limit - 1) / base) return std::nullopt;
        result *= base;
    }
    return result;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        const std::uint64_t r = a % b;
        a = b;
        b = r;
    }
    return a;
}

Integer reduce_mod(const Integer& value, const Integer& m) {
    Integer r = value % m;
    if (r < 0) r += m;
    return r;
}

std::uint64_t reduce_mod(const Integer& value, std::uint64_t m) {
    return reduce_mod(value, Integer(m)).convert_to<std::uint64_t>();
}

unsigned valuation_capped(std::uint64_t value, std::uint64_t p, unsigned cap) {
    unsigned v = 0;
    if (value == 0) return cap;
    while (v < cap && value % p == 0) {
        value /= p;
        ++v;
    }
    return v;
}

std::complex<double> unit_root(std::uint64_t num, std::uint64_t den) {
    num %= den;
    if (num == 0) return {1.0, 0.0};
    // Reduce exactly to an octant so the trig calls only see |a| <= pi/4.
    const unsigned __int128 scaled = static_cast<unsigned __int128>(num) * 8U;
    const auto q = static_cast<unsigned>(scaled / den);
    const auto rem = static_cast<std::uint64_t>(scaled - static_cast<unsigned __int128>(q) * den);
    constexpr long double quarter_pi = std::numbers::pi_v<long double> / 4.0L;
    unsigned k = q / 2;
    long double a = quarter_pi * static_cast<long double>(rem) / static_cast<long double>(den);
    if (q % 2 == 1) {
        k = (q + 1) / 2;
        a = -quarter_pi * static_cast<long double>(den - rem) / static_cast<long double>(den);
    }
    const long double c = std::cos(a);
    const long double s = std::sin(a);
    long double re = c;
    long double im = s;
    switch (k % 4) {
        case 1: re = -s; im = c; break;
        case 2: re = -c; im = -s; break;
        case 3: re = s; im = -c; break;
        default: break;
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

std::string to_string(const Rational& q) {
    const Integer num = boost::multiprecision::numerator(q);
    const Integer den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(text));
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        if (den == 0) throw UsageError("zero denominator in rational '" + text + "'");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw UsageError("malformed rational '" + text + "'");
    }
}

Rational rational_pow(const Rational& base, unsigned exp) {
    Rational result(1);
    for (unsigned i = 0; i < exp; ++i) result *= base;
    return result;
}

double to_double(const Rational& q) {
    return q.convert_to<double>();
}

}  // namespace padicsum
