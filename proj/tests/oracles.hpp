#pragma once

// Brute-force reference implementations for the tests. Curves are plain
// lambdas over 128-bit integers, so nothing here goes through the parser,
// the modular evaluator or the sieve.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using i128 = __int128;
using CurveFn = std::function<i128(i128, i128)>;

struct CorpusCurve {
    std::string text;
    CurveFn fn;
};

inline i128 mod(i128 v, i128 q) {
    i128 r = v % q;
    return r < 0 ? r + q : r;
}

inline const std::vector<CorpusCurve>& corpus() {
    static const std::vector<CorpusCurve> curves = {
        {"U - V^2", [](i128 u, i128 v) { return u - v * v; }},
        {"V^2 - U^3 - 1", [](i128 u, i128 v) { return v * v - u * u * u - 1; }},
        {"U^2 + U + V^2 + V + 1", [](i128 u, i128 v) { return u * u + u + v * v + v + 1; }},
        {"V^2 - U^3 - U - 1", [](i128 u, i128 v) { return v * v - u * u * u - u - 1; }},
        {"V^3 - U^2 - 2", [](i128 u, i128 v) { return v * v * v - u * u - 2; }},
        {"U*V^2 + V - U^3 + 5", [](i128 u, i128 v) { return u * v * v + v - u * u * u + 5; }},
        {"2*V^2 - 3*U^2 + 7*U*V - 11", [](i128 u, i128 v) { return 2 * v * v - 3 * u * u + 7 * u * v - 11; }},
    };
    return curves;
}

inline const CorpusCurve& curve(const std::string& text) {
    for (const auto& c : corpus())
        if (c.text == text) return c;
    throw std::out_of_range("no corpus curve " + text);
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> primes(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = lo; p <= hi; ++p)
        if (is_prime(p)) out.push_back(p);
    return out;
}

/// Number of m in [0,q) with f(n,m) = 0 mod q, for every n in [0,q).
inline std::vector<std::uint64_t> fibers(const CurveFn& f, std::uint64_t q) {
    std::vector<std::uint64_t> out(q, 0);
    for (std::uint64_t n = 0; n < q; ++n)
        for (std::uint64_t m = 0; m < q; ++m)
            if (mod(f(n, m), q) == 0) ++out[n];
    return out;
}

inline std::uint64_t count(const CurveFn& f, std::uint64_t q) {
    std::uint64_t total = 0;
    for (auto r : fibers(f, q)) total += r;
    return total;
}

/// Primes p <= x with a point mod p.
inline std::vector<std::uint64_t> pf(const CurveFn& f, std::uint64_t x) {
    std::vector<std::uint64_t> out;
    for (auto p : primes(2, x))
        if (count(f, p) > 0) out.push_back(p);
    return out;
}

inline std::uint64_t product(const std::vector<std::uint64_t>& ps) {
    std::uint64_t m = 1;
    for (auto p : ps) m *= p;
    return m;
}

/// Sum over all pairs (u,v) in Z_f(q) of exp(2 pi i a u / q), summed pair by pair.
inline std::complex<double> exp_sum(const CurveFn& f, std::uint64_t q, std::int64_t a) {
    std::complex<double> acc = 0;
    for (std::uint64_t u = 0; u < q; ++u)
        for (std::uint64_t v = 0; v < q; ++v)
            if (mod(f(u, v), q) == 0) {
                const double t = 2.0 * std::numbers::pi * static_cast<double>(mod(i128(a) * u, q)) / q;
                acc += std::polar(1.0, t);
            }
    return acc;
}

/// Smallest integer m with |m| <= bound and f(n, m) = 0.
inline std::optional<std::int64_t> integer_root_scan(const CurveFn& f, std::int64_t n, std::int64_t bound) {
    for (std::int64_t m = -bound; m <= bound; ++m)
        if (f(n, m) == 0) return m;
    return std::nullopt;
}

/// Pseudopoints n < ceiling: per-prime solvability by direct search over m,
/// integer roots by scanning |m| <= root_bound.
inline std::vector<std::int64_t> pseudopoints(const CurveFn& f, std::uint64_t x, std::int64_t ceiling,
                                              std::int64_t root_bound, std::size_t want = 1) {
    const auto ps = pf(f, x);
    std::vector<std::int64_t> out;
    for (std::int64_t n = 0; n < ceiling && out.size() < want; ++n) {
        bool ok = true;
        for (auto p : ps) {
            bool solvable = false;
            for (std::uint64_t m = 0; m < p && !solvable; ++m) solvable = mod(f(n, m), p) == 0;
            if (!solvable) {
                ok = false;
                break;
            }
        }
        if (ok && !integer_root_scan(f, n, root_bound)) out.push_back(n);
    }
    return out;
}

inline bool is_square(std::int64_t n) {
    if (n < 0) return false;
    for (std::int64_t r = 0; r * r <= n; ++r)
        if (r * r == n) return true;
    return false;
}

/// Smallest nonsquare n = 1 mod 8 that is a nonzero square mod every odd prime p <= x.
inline std::int64_t lehmer(std::uint64_t x) {
    for (std::int64_t n = 1;; n += 8) {
        if (is_square(n)) continue;
        bool ok = true;
        for (auto p : primes(3, x)) {
            bool qr = false;
            if (n % static_cast<std::int64_t>(p) != 0)
                for (std::uint64_t m = 1; m < p && !qr; ++m) qr = (m * m) % p == static_cast<std::uint64_t>(n) % p;
            if (!qr) {
                ok = false;
                break;
            }
        }
        if (ok) return n;
    }
}

/// Smallest n > 0, not g^k, with n = g^k mod p solvable for every prime p <= x.
inline std::int64_t pseudopower(std::int64_t g, std::uint64_t x) {
    for (std::int64_t n = 1;; ++n) {
        bool true_power = false;
        for (i128 pw = 1; pw <= n && pw >= -n; pw *= g) {
            if (pw == n) true_power = true;
            if (g == 0) break;
        }
        if (true_power) continue;
        bool ok = true;
        for (auto p : primes(2, x)) {
            bool hit = false;
            i128 pw = 1;
            for (std::uint64_t k = 0; k <= p && !hit; ++k, pw = mod(pw * g, p)) hit = mod(pw - n, p) == 0;
            if (!hit) {
                ok = false;
                break;
            }
        }
        if (ok) return n;
    }
}

} // namespace oracle
