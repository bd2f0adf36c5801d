#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "padicsum/arith.hpp"
#include "padicsum/level.hpp"

namespace padicsum {

using Exponents = std::vector<unsigned>;

struct Term {
    Integer coeff;
    Exponents exps;

    bool operator==(const Term&) const = default;
};

// Sparse polynomial in Z[x1..xn]. Terms are kept in canonical form: no zero
// coefficients, no repeated exponent vectors, sorted by descending exponent
// vector (lexicographic).
class Polynomial {
public:
    explicit Polynomial(std::size_t nvars);
    Polynomial(std::size_t nvars, std::vector<Term> terms);

    static Polynomial constant(std::size_t nvars, const Integer& c);
    static Polynomial variable(std::size_t nvars, std::size_t index);

    std::size_t nvars() const noexcept { return nvars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    Integer constant_term() const;
    unsigned total_degree() const noexcept;
    unsigned degree_in(std::size_t var) const noexcept;

    Polynomial derivative(std::size_t var) const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator-() const;
    Polynomial pow(unsigned exp) const;

    // Exact value at an integer point.
    Integer evaluate(std::span<const Integer> x) const;

    // f(y + scale * t) as a polynomial in t.
    Polynomial affine_substitute(std::span<const Integer> shift, const Integer& scale) const;

    bool operator==(const Polynomial&) const = default;

private:
    void canonicalize();

    std::size_t nvars_;
    std::vector<Term> terms_;
};

// Canonical text form, parseable by parse_polynomial. Variables print as x1..xn.
std::string to_string(const Polynomial& f);

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := int | var | '(' expr ')'      (a leading sign is accepted on any factor)
//   var    := 'x' uint | 'x' | 'y' | 'z'    (x, y, z alias x1, x2, x3)
// Whitespace is insignificant. Throws ParseError.
Polynomial parse_polynomial(std::string_view text, std::size_t nvars);

// f(x) mod p^m, exact for arbitrary integer inputs.
std::uint64_t eval_mod(const Polynomial& f, std::span<const std::int64_t> x, const PadicLevel& level);
Integer eval_mod(const Polynomial& f, std::span<const Integer> x, const PadicLevel& level);

// Rejects constant polynomials (every sum/lct operation assumes non-constant f).
void require_nonconstant(const Polynomial& f);

// Coefficients reduced modulo a 63-bit modulus, for the enumeration loops.
class ModularPolynomial {
public:
    ModularPolynomial(const Polynomial& f, std::uint64_t modulus);

    std::size_t nvars() const noexcept { return nvars_; }
    std::uint64_t modulus() const noexcept { return modulus_; }

    // x entries must already lie in [0, modulus).
    std::uint64_t evaluate(std::span<const std::uint64_t> x) const;

private:
    struct ModTerm {
        std::uint64_t coeff;
        Exponents exps;
    };

    std::size_t nvars_;
    std::uint64_t modulus_;
    std::vector<ModTerm> terms_;
};

}  // namespace padicsum
