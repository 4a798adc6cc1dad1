#pragma once

// Exact sparse integer polynomials in U and V.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "error.hpp"
#include "modarith.hpp"

namespace pseudopoints {

/// Exponent pair (degree in U, degree in V).
struct Monomial {
    std::uint32_t u = 0;
    std::uint32_t v = 0;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// f(U,V) with arbitrary-precision coefficients. Terms are kept in descending
/// (i, j) order, which is also the canonical rendering order.
class BivariatePoly {
public:
    using TermMap = std::map<Monomial, BigInt, std::greater<Monomial>>;

    BivariatePoly() = default;

    /// Builds from (i, j, c) triples; like terms merge and zeros vanish.
    static BivariatePoly from_terms(const std::vector<std::pair<Monomial, BigInt>>& terms) {
        BivariatePoly f;
        for (const auto& [mono, c] : terms) f.add_term(mono, c);
        return f;
    }

    void add_term(Monomial mono, const BigInt& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(mono, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
        recompute_degrees();
    }

    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    std::uint32_t deg_u() const noexcept { return deg_u_; }
    std::uint32_t deg_v() const noexcept { return deg_v_; }
    std::uint64_t deg_total() const noexcept { return deg_total_; }

    /// Coefficient of U^i V^j (zero when absent).
    BigInt coeff(std::uint32_t i, std::uint32_t j) const {
        auto it = terms_.find(Monomial{i, j});
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    friend bool operator==(const BivariatePoly& a, const BivariatePoly& b) {
        return a.terms_ == b.terms_;
    }

private:
    void recompute_degrees() noexcept {
        deg_u_ = deg_v_ = 0;
        deg_total_ = 0;
        for (const auto& [mono, c] : terms_) {
            deg_u_ = std::max(deg_u_, mono.u);
            deg_v_ = std::max(deg_v_, mono.v);
            deg_total_ = std::max<std::uint64_t>(deg_total_, std::uint64_t{mono.u} + mono.v);
        }
    }

    TermMap terms_;
    std::uint32_t deg_u_ = 0;
    std::uint32_t deg_v_ = 0;
    std::uint64_t deg_total_ = 0;
};

/// Dense univariate polynomial; coefficients()[k] multiplies V^k.
/// The zero polynomial has no coefficients and degree() == -1.
class UnivariatePoly {
public:
    UnivariatePoly() = default;
    explicit UnivariatePoly(std::vector<BigInt> coefficients) : coeffs_(std::move(coefficients)) {
        normalize();
    }

    const std::vector<BigInt>& coefficients() const noexcept { return coeffs_; }
    long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    const BigInt& leading() const { return coeffs_.back(); }

    BigInt operator()(const BigInt& m) const {
        BigInt acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * m + *it;
        return acc;
    }

    friend bool operator==(const UnivariatePoly&, const UnivariatePoly&) = default;

private:
    void normalize() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<BigInt> coeffs_;
};

namespace detail {

class PolyParser {
public:
    explicit PolyParser(std::string_view text) : text_(text) {}

    BivariatePoly parse() {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("empty polynomial", pos_);
        BivariatePoly f;
        bool negative = false;
        if (peek() == '+' || peek() == '-') {
            negative = peek() == '-';
            ++pos_;
        }
        parse_term(f, negative);
        while (true) {
            skip_ws();
            if (pos_ == text_.size()) break;
            char c = peek();
            if (c != '+' && c != '-') throw ParseError(std::string("unexpected '") + c + "'", pos_);
            ++pos_;
            parse_term(f, c == '-');
        }
        return f;
    }

private:
    char peek() const { return text_[pos_]; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_digit() const {
        return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
    }

    bool at_alpha() const {
        return pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]));
    }

    BigInt parse_int() {
        BigInt value = 0;
        while (at_digit()) value = value * 10 + (text_[pos_++] - '0');
        return value;
    }

    std::uint32_t parse_exponent() {
        skip_ws();
        if (!at_digit()) throw ParseError("expected exponent", pos_);
        const std::size_t start = pos_;
        BigInt e = parse_int();
        if (e > std::numeric_limits<std::uint32_t>::max())
            throw ParseError("exponent exceeds 32 bits", start);
        return e.convert_to<std::uint32_t>();
    }

    // factor := var ["^" int]
    void parse_factor(Monomial& mono) {
        skip_ws();
        if (!at_alpha()) {
            if (pos_ == text_.size()) throw ParseError("expected variable", pos_);
            throw ParseError(std::string("expected variable, found '") + peek() + "'", pos_);
        }
        const std::size_t at = pos_;
        char var = text_[pos_++];
        if (var != 'U' && var != 'V')
            throw ParseError(std::string("unknown variable '") + var + "' (only U and V)", at);
        std::uint64_t e = 1;
        skip_ws();
        if (pos_ < text_.size() && peek() == '^') {
            ++pos_;
            e = parse_exponent();
        }
        if (var == 'U') {
            u_acc_ += e;
            if (u_acc_ > std::numeric_limits<std::uint32_t>::max())
                throw ParseError("exponent exceeds 32 bits", at);
            mono.u = static_cast<std::uint32_t>(u_acc_);
        } else {
            v_acc_ += e;
            if (v_acc_ > std::numeric_limits<std::uint32_t>::max())
                throw ParseError("exponent exceeds 32 bits", at);
            mono.v = static_cast<std::uint32_t>(v_acc_);
        }
    }

    // term := int | [int ["*"]] factor { ["*"] factor }
    void parse_term(BivariatePoly& f, bool negative) {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("expected term", pos_);
        Monomial mono;
        u_acc_ = v_acc_ = 0;
        BigInt coeff = 1;
        bool have_factor = false;
        if (at_digit()) {
            coeff = parse_int();
            skip_ws();
            if (pos_ < text_.size() && peek() == '*') {
                ++pos_;
                parse_factor(mono);
                have_factor = true;
            } else if (at_alpha()) {
                parse_factor(mono);
                have_factor = true;
            }
        } else {
            parse_factor(mono);
            have_factor = true;
        }
        while (have_factor) {
            skip_ws();
            if (pos_ < text_.size() && peek() == '*') {
                ++pos_;
                parse_factor(mono);
            } else if (at_alpha()) {
                parse_factor(mono);
            } else {
                break;
            }
        }
        f.add_term(mono, negative ? BigInt(-coeff) : coeff);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::uint64_t u_acc_ = 0;
    std::uint64_t v_acc_ = 0;
};

} // namespace detail

/// Parses text such as "V^2 - U^3 - U - 1". Between factors of a term the
/// "*" is optional, "^1" may be omitted and whitespace is ignored.
inline BivariatePoly parse_poly(std::string_view text) { return detail::PolyParser(text).parse(); }

/// Canonical text: descending (i, j), unit coefficients and unit exponents
/// elided, " + " / " - " separators. The zero polynomial renders as "0".
inline std::string render(const BivariatePoly& f) {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [mono, c] : f.terms()) {
        const bool negative = c < 0;
        const BigInt magnitude = negative ? BigInt(-c) : c;
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        std::string body;
        auto append_var = [&body](char var, std::uint32_t e) {
            if (e == 0) return;
            if (!body.empty()) body += "*";
            body += var;
            if (e != 1) body += "^" + std::to_string(e);
        };
        if (magnitude != 1 || (mono.u == 0 && mono.v == 0)) body = magnitude.str();
        append_var('U', mono.u);
        append_var('V', mono.v);
        out += body;
    }
    return out;
}

namespace detail {

inline std::vector<BigInt> powers(const BigInt& base, std::uint32_t max_exp) {
    std::vector<BigInt> out(std::size_t{max_exp} + 1);
    out[0] = 1;
    for (std::size_t k = 1; k < out.size(); ++k) out[k] = out[k - 1] * base;
    return out;
}

} // namespace detail

inline BigInt eval(const BivariatePoly& f, const BigInt& n, const BigInt& m) {
    if (f.is_zero()) return 0;
    const auto pu = detail::powers(n, f.deg_u());
    const auto pv = detail::powers(m, f.deg_v());
    BigInt acc = 0;
    for (const auto& [mono, c] : f.terms()) acc += c * pu[mono.u] * pv[mono.v];
    return acc;
}

/// The polynomial f(n, V) in V.
inline UnivariatePoly specialize_u(const BivariatePoly& f, const BigInt& n) {
    if (f.is_zero()) return {};
    const auto pu = detail::powers(n, f.deg_u());
    std::vector<BigInt> coeffs(std::size_t{f.deg_v()} + 1);
    for (const auto& [mono, c] : f.terms()) coeffs[mono.v] += c * pu[mono.u];
    return UnivariatePoly(std::move(coeffs));
}

/// Result of reducing f modulo a prime. `poly` has coefficients in [0, p).
struct Reduction {
    BivariatePoly poly;
    bool zero = false;
    bool deg_u_dropped = false;
    bool deg_v_dropped = false;
};

inline Reduction reduce_mod(const BivariatePoly& f, std::uint64_t p) {
    Reduction r;
    for (const auto& [mono, c] : f.terms()) {
        const std::uint64_t residue = mod_u64(c, p);
        if (residue != 0) r.poly.add_term(mono, BigInt(residue));
    }
    r.zero = r.poly.is_zero();
    r.deg_u_dropped = r.poly.deg_u() < f.deg_u();
    r.deg_v_dropped = r.poly.deg_v() < f.deg_v();
    return r;
}

/// f reduced mod a word-size modulus q, ready for fast evaluation. Works for
/// composite q as well; used by every enumeration in the library.
class ModularPoly {
public:
    struct Term {
        std::uint32_t u;
        std::uint32_t v;
        std::uint64_t c;
    };

    ModularPoly(const BivariatePoly& f, std::uint64_t q) : q_(q), deg_v_(f.deg_v()) {
        for (const auto& [mono, c] : f.terms()) {
            const std::uint64_t r = mod_u64(c, q);
            if (r != 0) terms_.push_back({mono.u, mono.v, r});
        }
    }

    std::uint64_t modulus() const noexcept { return q_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Coefficients of f(u, V) mod q, indexed by power of V (size deg_v + 1).
    std::vector<std::uint64_t> specialize(std::uint64_t u) const {
        std::vector<std::uint64_t> g(std::size_t{deg_v_} + 1, 0);
        u %= q_;
        for (const auto& t : terms_) {
            g[t.v] = (g[t.v] + mul_mod(t.c, pow_mod(u, t.u, q_), q_)) % q_;
        }
        return g;
    }

    /// Horner evaluation of a specialized coefficient vector at v.
    static std::uint64_t eval_univariate(const std::vector<std::uint64_t>& g, std::uint64_t v,
                                         std::uint64_t q) {
        std::uint64_t acc = 0;
        for (auto it = g.rbegin(); it != g.rend(); ++it) acc = (mul_mod(acc, v, q) + *it) % q;
        return acc;
    }

    std::uint64_t operator()(std::uint64_t u, std::uint64_t v) const {
        return eval_univariate(specialize(u), v % q_, q_);
    }

private:
    std::uint64_t q_;
    std::uint32_t deg_v_;
    std::vector<Term> terms_;
};

} // namespace pseudopoints
