#include "padicsum/level.hpp"

#include <sstream>

#include "padicsum/error.hpp"

namespace padicsum {

PadicLevel::PadicLevel(std::uint64_t p, unsigned m) : p_(p), m_(m) {
    if (!is_prime(p)) throw UsageError("p = " + std::to_string(p) + " is not prime");
    if (m < 1) throw UsageError("level m must be >= 1");
    modulus_ = boost::multiprecision::pow(Integer(p), m);
    small_modulus_ = checked_pow(p, m);
}

std::uint64_t PadicLevel::require_small_modulus() const {
    if (!small_modulus_) {
        throw UsageError("modulus " + std::to_string(p_) + "^" + std::to_string(m_) + " exceeds 63 bits");
    }
    return *small_modulus_;
}

std::uint64_t PadicLevel::power(unsigned k) const {
    const auto value = checked_pow(p_, k);
    if (!value) throw UsageError("p^k exceeds 63 bits");
    return *value;
}

std::string to_string(const ResidueBox& box) {
    if (box.kind == BoxKind::Full) return "full";
    std::ostringstream out;
    out << "shifted(";
    for (std::size_t i = 0; i < box.base.size(); ++i) {
        if (i) out << ',';
        out << box.base[i];
    }
    out << ')';
    return out.str();
}

std::optional<std::uint64_t> box_cardinality(const PadicLevel& level, const ResidueBox& box, std::size_t nvars) {
    const unsigned per_coord = box.kind == BoxKind::Full ? level.m() : level.m() - 1;
    if (per_coord * nvars > 64 * 8) return std::nullopt;
    return checked_pow(level.p(), static_cast<unsigned>(per_coord * nvars));
}

ValuationAc ord_and_ac(std::uint64_t z, const PadicLevel& level) {
    const std::uint64_t modulus = level.require_small_modulus();
    z %= modulus;
    ValuationAc out;
    if (z == 0) {
        out.valuation = level.m();
        return out;
    }
    while (z % level.p() == 0) {
        z /= level.p();
        ++out.valuation;
    }
    out.angular = z % level.p();
    return out;
}

ValuationAc ord_and_ac(const Integer& z, const PadicLevel& level) {
    Integer r = reduce_mod(z, level.modulus());
    ValuationAc out;
    if (r == 0) {
        out.valuation = level.m();
        return out;
    }
    const Integer p(level.p());
    while (r % p == 0) {
        r /= p;
        ++out.valuation;
    }
    out.angular = (r % p).convert_to<std::uint64_t>();
    return out;
}

}  // namespace padicsum
