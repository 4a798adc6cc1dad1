#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "error.hpp"

namespace pseudopoints {

using BigInt = boost::multiprecision::cpp_int;

inline std::string to_decimal(const BigInt& v) { return v.str(); }

/// Parses an optionally signed decimal integer. Throws DomainError on junk.
inline BigInt from_decimal(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    if (i == text.size())
        throw DomainError("empty integer literal '" + std::string(text) + "'");
    BigInt out = 0;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c < '0' || c > '9')
            throw DomainError("invalid integer literal '" + std::string(text) + "'");
        out = out * 10 + (c - '0');
    }
    return negative ? BigInt(-out) : out;
}

/// Least nonnegative residue of v modulo m (m >= 1).
inline std::uint64_t mod_u64(const BigInt& v, std::uint64_t m) {
    BigInt r = v % m;
    if (r < 0) r += m;
    return r.convert_to<std::uint64_t>();
}

/// Natural logarithm of a positive big integer, accurate to double precision
/// well past the range of double.
inline double log_big(const BigInt& v) {
    if (v <= 0) return std::nan("");
    const std::size_t bits = boost::multiprecision::msb(v) + 1;
    if (bits <= 1000) return std::log(v.convert_to<double>());
    const std::size_t shift = bits - 64;
    BigInt top = v >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline BigInt big_abs(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

} // namespace pseudopoints
