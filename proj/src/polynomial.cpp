#include "padicsum/polynomial.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "padicsum/error.hpp"

namespace padicsum {

Polynomial::Polynomial(std::size_t nvars) : nvars_(nvars) {
    if (nvars == 0) throw UsageError("polynomial needs at least one variable");
}

Polynomial::Polynomial(std::size_t nvars, std::vector<Term> terms) : nvars_(nvars), terms_(std::move(terms)) {
    if (nvars == 0) throw UsageError("polynomial needs at least one variable");
    for (const auto& t : terms_) {
        if (t.exps.size() != nvars) throw UsageError("term exponent vector has wrong length");
    }
    canonicalize();
}

Polynomial Polynomial::constant(std::size_t nvars, const Integer& c) {
    return Polynomial(nvars, {Term{c, Exponents(nvars, 0)}});
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
    Exponents e(nvars, 0);
    e.at(index) = 1;
    return Polynomial(nvars, {Term{1, e}});
}

void Polynomial::canonicalize() {
    std::map<Exponents, Integer, std::greater<>> merged;
    for (auto& t : terms_) merged[t.exps] += t.coeff;
    terms_.clear();
    for (auto& [exps, c] : merged) {
        if (c != 0) terms_.push_back(Term{std::move(c), exps});
    }
}

bool Polynomial::is_constant() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) {
        return std::all_of(t.exps.begin(), t.exps.end(), [](unsigned e) { return e == 0; });
    });
}

Integer Polynomial::constant_term() const {
    // The constant monomial sorts last.
    if (terms_.empty()) return 0;
    const auto& last = terms_.back();
    if (std::all_of(last.exps.begin(), last.exps.end(), [](unsigned e) { return e == 0; })) return last.coeff;
    return 0;
}

unsigned Polynomial::total_degree() const noexcept {
    unsigned d = 0;
    for (const auto& t : terms_) {
        unsigned s = 0;
        for (unsigned e : t.exps) s += e;
        d = std::max(d, s);
    }
    return d;
}

unsigned Polynomial::degree_in(std::size_t var) const noexcept {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.exps[var]);
    return d;
}

Polynomial Polynomial::derivative(std::size_t var) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (t.exps[var] == 0) continue;
        Term d{t.coeff * t.exps[var], t.exps};
        d.exps[var] -= 1;
        out.push_back(std::move(d));
    }
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    if (rhs.nvars_ != nvars_) throw UsageError("variable count mismatch");
    std::vector<Term> out = terms_;
    out.insert(out.end(), rhs.terms_.begin(), rhs.terms_.end());
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const { return *this + (-rhs); }

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (rhs.nvars_ != nvars_) throw UsageError("variable count mismatch");
    std::vector<Term> out;
    out.reserve(terms_.size() * rhs.terms_.size());
    for (const auto& a : terms_) {
        for (const auto& b : rhs.terms_) {
            Term t{a.coeff * b.coeff, a.exps};
            for (std::size_t i = 0; i < nvars_; ++i) t.exps[i] += b.exps[i];
            out.push_back(std::move(t));
        }
    }
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::pow(unsigned exp) const {
    Polynomial result = constant(nvars_, 1);
    Polynomial base = *this;
    while (exp > 0) {
        if (exp & 1U) result = result * base;
        exp >>= 1U;
        if (exp) base = base * base;
    }
    return result;
}

Integer Polynomial::evaluate(std::span<const Integer> x) const {
    if (x.size() != nvars_) throw UsageError("point dimension does not match variable count");
    Integer sum = 0;
    for (const auto& t : terms_) {
        Integer v = t.coeff;
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (t.exps[i]) v *= boost::multiprecision::pow(x[i], t.exps[i]);
        }
        sum += v;
    }
    return sum;
}

Polynomial Polynomial::affine_substitute(std::span<const Integer> shift, const Integer& scale) const {
    if (shift.size() != nvars_) throw UsageError("shift dimension does not match variable count");
    // Cache (y_i + scale*t_i)^e per (variable, exponent).
    std::vector<std::vector<Polynomial>> powers(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) {
        std::vector<Term> lin;
        lin.push_back(Term{shift[i], Exponents(nvars_, 0)});
        Exponents e(nvars_, 0);
        e[i] = 1;
        lin.push_back(Term{scale, e});
        const Polynomial base(nvars_, std::move(lin));
        powers[i].push_back(constant(nvars_, 1));
        for (unsigned k = 1; k <= degree_in(i); ++k) powers[i].push_back(powers[i].back() * base);
    }
    Polynomial out(nvars_);
    for (const auto& t : terms_) {
        Polynomial term = constant(nvars_, t.coeff);
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (t.exps[i]) term = term * powers[i][t.exps[i]];
        }
        out = out + term;
    }
    return out;
}

std::string to_string(const Polynomial& f) {
    if (f.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& t : f.terms()) {
        Integer c = t.coeff;
        if (first) {
            if (c < 0) {
                out << '-';
                c = -c;
            }
        } else {
            out << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        bool wrote = false;
        const bool is_const = std::all_of(t.exps.begin(), t.exps.end(), [](unsigned e) { return e == 0; });
        if (c != 1 || is_const) {
            out << c.str();
            wrote = true;
        }
        for (std::size_t i = 0; i < t.exps.size(); ++i) {
            if (t.exps[i] == 0) continue;
            if (wrote) out << '*';
            out << 'x' << (i + 1);
            if (t.exps[i] > 1) out << '^' << t.exps[i];
            wrote = true;
        }
    }
    return out.str();
}

namespace {

class Parser {
public:
    Parser(std::string_view text, std::size_t nvars) : text_(text), nvars_(nvars) {}

    Polynomial parse() {
        Polynomial result = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return result;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool at_digit() const { return pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9'; }

    std::string digits() {
        const std::size_t start = pos_;
        while (at_digit()) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Polynomial expr() {
        skip_ws();
        if (pos_ == text_.size()) fail("expected expression");
        Polynomial acc = term();
        for (;;) {
            if (accept('+')) {
                acc = acc + term();
            } else if (accept('-')) {
                acc = acc - term();
            } else {
                return acc;
            }
        }
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (accept('*')) acc = acc * factor();
        return acc;
    }

    Polynomial factor() {
        if (accept('-')) return -factor();
        if (accept('+')) return factor();
        Polynomial base = atom();
        if (accept('^')) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '-') fail("negative exponent");
            if (!at_digit()) fail("expected exponent");
            const std::string d = digits();
            if (d.size() > 6) fail("exponent too large");
            base = base.pow(static_cast<unsigned>(std::stoul(d)));
        }
        return base;
    }

    Polynomial atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (at_digit()) return Polynomial::constant(nvars_, Integer(digits()));
        if (c == '(') {
            ++pos_;
            Polynomial inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (c == 'x' || c == 'y' || c == 'z') {
            const std::size_t at = pos_;
            ++pos_;
            std::size_t index = 0;
            if (c == 'x' && at_digit()) {
                const std::string d = digits();
                if (d.size() > 6) {
                    pos_ = at;
                    fail("variable index out of range");
                }
                index = std::stoul(d);
                if (index == 0) {
                    pos_ = at;
                    fail("variable index out of range (x0)");
                }
            } else {
                index = c == 'x' ? 1 : (c == 'y' ? 2 : 3);
            }
            if (index > nvars_) {
                pos_ = at;
                fail("variable index " + std::to_string(index) + " out of range for " + std::to_string(nvars_) +
                     " variables");
            }
            return Polynomial::variable(nvars_, index - 1);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t nvars_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t nvars) {
    if (nvars == 0) throw UsageError("nvars must be positive");
    return Parser(text, nvars).parse();
}

Integer eval_mod(const Polynomial& f, std::span<const Integer> x, const PadicLevel& level) {
    if (x.size() != f.nvars()) throw UsageError("point dimension does not match variable count");
    const Integer& modulus = level.modulus();
    std::vector<Integer> xr;
    xr.reserve(x.size());
    for (const auto& v : x) xr.push_back(reduce_mod(v, modulus));
    Integer sum = 0;
    for (const auto& t : f.terms()) {
        Integer v = reduce_mod(t.coeff, modulus);
        for (std::size_t i = 0; i < xr.size(); ++i) {
            if (!t.exps[i]) continue;
            const Integer power = boost::multiprecision::powm(xr[i], Integer(t.exps[i]), modulus);
            v = v * power % modulus;
        }
        sum = (sum + v) % modulus;
    }
    return sum;
}

std::uint64_t eval_mod(const Polynomial& f, std::span<const std::int64_t> x, const PadicLevel& level) {
    if (x.size() != f.nvars()) throw UsageError("point dimension does not match variable count");
    const std::uint64_t modulus = level.require_small_modulus();
    std::vector<std::uint64_t> xr;
    xr.reserve(x.size());
    for (auto v : x) xr.push_back(reduce_mod(Integer(v), modulus));
    return ModularPolynomial(f, modulus).evaluate(xr);
}

void require_nonconstant(const Polynomial& f) {
    if (f.is_constant()) throw UsageError("polynomial is constant; a non-constant polynomial is required");
}

ModularPolynomial::ModularPolynomial(const Polynomial& f, std::uint64_t modulus)
    : nvars_(f.nvars()), modulus_(modulus) {
    if (modulus == 0 || modulus >= (std::uint64_t{1} << 63U)) throw UsageError("modulus out of range");
    for (const auto& t : f.terms()) {
        const std::uint64_t c = reduce_mod(t.coeff, modulus);
        if (c != 0) terms_.push_back(ModTerm{c, t.exps});
    }
}

std::uint64_t ModularPolynomial::evaluate(std::span<const std::uint64_t> x) const {
    std::uint64_t sum = 0;
    for (const auto& t : terms_) {
        std::uint64_t v = t.coeff;
        for (std::size_t i = 0; i < nvars_; ++i) {
            for (unsigned e = 0; e < t.exps[i]; ++e) v = mulmod(v, x[i], modulus_);
        }
        sum = addmod(sum, v, modulus_);
    }
    return sum;
}

}  // namespace padicsum
