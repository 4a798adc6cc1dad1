#pragma once

// Per-prime data of a curve f(U,V) = 0: the point set Z_f(p), the residues u
// that lift to a point, the set P_f(x) of primes with a local point and the
// modulus M_f(x) built from them.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "bitvector.hpp"
#include "error.hpp"
#include "modarith.hpp"
#include "parallel.hpp"
#include "polyring.hpp"

namespace pseudopoints {

/// Largest prime (or composite modulus) any enumeration will accept.
inline constexpr std::uint64_t kEnumerationBudget = 1'000'000;

inline constexpr std::uint32_t kNoWitness = 0xffffffffu;

struct LocalCurveData {
    std::uint64_t p = 0;
    std::uint64_t point_count = 0;
    BitVector admissible;               // u in [0,p) with f(u,V) = 0 solvable mod p
    std::vector<std::uint32_t> witness; // smallest root m for each u, or kNoWitness
    std::vector<std::uint32_t> fiber;   // number of roots m for each u
    bool in_pf = false;
    bool degenerate = false;            // f vanishes identically mod p
    double weil_slack = 0.0;            // |point_count - p| / sqrt(p)

    std::optional<std::uint64_t> witness_for(std::uint64_t u) const {
        u %= p;
        if (witness[u] == kNoWitness) return std::nullopt;
        return witness[u];
    }

    friend bool operator==(const LocalCurveData&, const LocalCurveData&) = default;
};

struct GlobalModulus {
    std::uint64_t x = 1;
    std::vector<std::uint64_t> primes;            // P_f(x), increasing
    std::vector<std::uint64_t> degenerate_primes; // f == 0 mod p, excluded
    BigInt m_value = 1;
    std::size_t pi_pf = 0;
};

/// GlobalModulus together with the local records of every prime p <= x.
struct PrimeData {
    GlobalModulus modulus;
    std::vector<LocalCurveData> local;

    /// Records of the primes in P_f(x) only, in increasing order.
    std::vector<const LocalCurveData*> in_pf() const {
        std::vector<const LocalCurveData*> out;
        for (const auto& d : local)
            if (d.in_pf) out.push_back(&d);
        return out;
    }
};

enum class CountMethod {
    automatic, ///< closed form when deg_v == 2 and p is odd, evaluation otherwise
    naive,     ///< evaluate f(u, v) at every pair
};

namespace detail {

inline double weil_slack(std::uint64_t count, std::uint64_t p) {
    const double diff = static_cast<double>(count) - static_cast<double>(p);
    return std::abs(diff) / std::sqrt(static_cast<double>(p));
}

struct Fiber {
    std::uint32_t roots = 0;
    std::uint32_t smallest = kNoWitness;
};

inline Fiber scan_roots(const std::vector<std::uint64_t>& g, std::uint64_t p) {
    Fiber out;
    bool constant = true;
    for (std::size_t k = 1; k < g.size(); ++k)
        if (g[k] != 0) constant = false;
    if (constant) {
        if (g[0] == 0) out = {static_cast<std::uint32_t>(p), 0};
        return out;
    }
    for (std::uint64_t v = 0; v < p; ++v) {
        if (ModularPoly::eval_univariate(g, v, p) == 0) {
            if (out.roots == 0) out.smallest = static_cast<std::uint32_t>(v);
            ++out.roots;
        }
    }
    return out;
}

// a V^2 + b V + c over F_p, p odd.
inline Fiber quadratic_roots(const std::vector<std::uint64_t>& g, std::uint64_t p) {
    const std::uint64_t c = g[0], b = g[1], a = g[2];
    if (a == 0) {
        if (b == 0) return c == 0 ? Fiber{static_cast<std::uint32_t>(p), 0} : Fiber{};
        const std::uint64_t root = mul_mod((p - c) % p, inv_mod_prime(b, p), p);
        return {1, static_cast<std::uint32_t>(root)};
    }
    const std::uint64_t disc = (mul_mod(b, b, p) + p - mul_mod(4 % p, mul_mod(a, c, p), p)) % p;
    const std::uint64_t inv2a = inv_mod_prime(mul_mod(2, a, p), p);
    const std::uint64_t minus_b = (p - b) % p;
    if (disc == 0) return {1, static_cast<std::uint32_t>(mul_mod(minus_b, inv2a, p))};
    const auto s = sqrt_mod(disc, p);
    if (!s) return {};
    const std::uint64_t r1 = mul_mod((minus_b + *s) % p, inv2a, p);
    const std::uint64_t r2 = mul_mod((minus_b + p - *s) % p, inv2a, p);
    return {2, static_cast<std::uint32_t>(std::min(r1, r2))};
}

} // namespace detail

/// Enumerates Z_f(p). A prime where f reduces to zero yields a record flagged
/// `degenerate` with no points, which keeps it out of P_f.
inline LocalCurveData local_points(const BivariatePoly& f, std::uint64_t p,
                                   CountMethod method = CountMethod::automatic) {
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    if (p > kEnumerationBudget)
        throw BudgetError("prime " + std::to_string(p) + " exceeds the enumeration budget of " +
                          std::to_string(kEnumerationBudget));
    LocalCurveData d;
    d.p = p;
    d.admissible = BitVector(p);
    d.witness.assign(p, kNoWitness);
    d.fiber.assign(p, 0);

    const ModularPoly fp(f, p);
    if (fp.is_zero()) {
        d.degenerate = true;
        d.weil_slack = detail::weil_slack(0, p);
        return d;
    }
    const bool closed_form = method == CountMethod::automatic && f.deg_v() == 2 && p != 2;
    for (std::uint64_t u = 0; u < p; ++u) {
        const auto g = fp.specialize(u);
        const auto fiber = closed_form ? detail::quadratic_roots(g, p) : detail::scan_roots(g, p);
        if (fiber.roots == 0) continue;
        d.admissible.set(u);
        d.witness[u] = fiber.smallest;
        d.fiber[u] = fiber.roots;
        d.point_count += fiber.roots;
    }
    d.in_pf = d.point_count > 0;
    d.weil_slack = detail::weil_slack(d.point_count, p);
    return d;
}

/// Builds M_f(x) from per-prime records given for every prime p <= x.
inline GlobalModulus assemble_modulus(std::uint64_t x, const std::vector<LocalCurveData>& local) {
    GlobalModulus g;
    g.x = x;
    for (const auto& d : local) {
        if (d.degenerate) g.degenerate_primes.push_back(d.p);
        if (!d.in_pf) continue;
        g.primes.push_back(d.p);
        g.m_value *= d.p;
    }
    g.pi_pf = g.primes.size();
    return g;
}

inline PrimeData primes_pf(const BivariatePoly& f, std::uint64_t x, unsigned jobs = 1) {
    if (x < 1) throw DomainError("x must be at least 1");
    const auto primes = primes_up_to(x);
    PrimeData out;
    out.local = parallel_map(primes.size(), jobs, [&](std::size_t i) { return local_points(f, primes[i]); });
    out.modulus = assemble_modulus(x, out.local);
    return out;
}

struct WeilCheck {
    bool passes = false;
    double slack = 0.0;
};

/// c defaults to 2 * max(1, (d-1)(d-2)/2) with d the total degree.
inline double default_weil_constant(const BivariatePoly& f) {
    const double d = static_cast<double>(f.deg_total());
    return 2.0 * std::max(1.0, (d - 1.0) * (d - 2.0) / 2.0);
}

inline WeilCheck weil_check(const LocalCurveData& d, double c) {
    const long double diff = static_cast<long double>(d.point_count) - static_cast<long double>(d.p);
    const long double bound = static_cast<long double>(c) * c * static_cast<long double>(d.p);
    return {diff * diff <= bound, d.weil_slack};
}

inline WeilCheck weil_check(const BivariatePoly& f, std::uint64_t p, double c) {
    return weil_check(local_points(f, p), c);
}

/// Number of roots m in [0,q) of f(n, m) = 0 mod q, for each n in [0,q).
/// Plain double loop; q need not be prime.
inline std::vector<std::uint32_t> fiber_counts_mod(const BivariatePoly& f, std::uint64_t q) {
    if (q == 0) throw DomainError("modulus must be positive");
    if (q > kEnumerationBudget)
        throw BudgetError("modulus " + std::to_string(q) + " exceeds the enumeration budget of " +
                          std::to_string(kEnumerationBudget));
    const ModularPoly fq(f, q);
    std::vector<std::uint32_t> fiber(q, 0);
    for (std::uint64_t n = 0; n < q; ++n) {
        const auto g = fq.specialize(n);
        std::uint32_t roots = 0;
        for (std::uint64_t m = 0; m < q; ++m)
            if (ModularPoly::eval_univariate(g, m, q) == 0) ++roots;
        fiber[n] = roots;
    }
    return fiber;
}

/// #Z_f(q) by direct enumeration.
inline std::uint64_t count_points_mod(const BivariatePoly& f, std::uint64_t q) {
    std::uint64_t total = 0;
    for (auto r : fiber_counts_mod(f, q)) total += r;
    return total;
}

/// M_f(x) as a word, or BudgetError when it exceeds the enumeration budget.
inline std::uint64_t modulus_within_budget(const GlobalModulus& g) {
    if (g.m_value > kEnumerationBudget)
        throw BudgetError("M_f(" + std::to_string(g.x) + ") = " + to_decimal(g.m_value) +
                          " exceeds the enumeration budget of " + std::to_string(kEnumerationBudget));
    return g.m_value.convert_to<std::uint64_t>();
}

struct ProductFormula {
    BigInt lhs;
    BigInt rhs;
    bool equal = false;
};

/// Compares #Z_f(M_f(x)) counted directly with the product of local counts.
inline ProductFormula product_formula_check(const BivariatePoly& f, const PrimeData& data) {
    const std::uint64_t m = modulus_within_budget(data.modulus);
    ProductFormula r;
    r.lhs = count_points_mod(f, m);
    r.rhs = 1;
    for (const auto* d : data.in_pf()) r.rhs *= d->point_count;
    r.equal = r.lhs == r.rhs;
    return r;
}

inline ProductFormula product_formula_check(const BivariatePoly& f, std::uint64_t x, unsigned jobs = 1) {
    return product_formula_check(f, primes_pf(f, x, jobs));
}

/// How far log #Z_f(M_f(x)) / log M_f(x) sits from 1, with the constant c0
/// that the deviation needs against x^{-1/2}.
struct CountExponent {
    double exponent = std::nan("");
    double deviation = std::nan("");
    double c0 = std::nan("");
};

inline CountExponent point_count_exponent(const PrimeData& data) {
    CountExponent r;
    if (data.modulus.m_value <= 1) return r;
    BigInt count = 1;
    for (const auto* d : data.in_pf()) count *= d->point_count;
    r.exponent = log_big(count) / log_big(data.modulus.m_value);
    r.deviation = std::abs(r.exponent - 1.0);
    r.c0 = r.deviation * std::sqrt(static_cast<double>(data.modulus.x));
    return r;
}

} // namespace pseudopoints
