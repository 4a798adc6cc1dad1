#pragma once

// Exponential sums S_a = sum over (u,v) in Z_f(q) of e_q(a u), e_q(z) = exp(2 pi i z / q).

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "error.hpp"
#include "localdata.hpp"
#include "parallel.hpp"
#include "polyring.hpp"

namespace pseudopoints {

struct ExpSumRecord {
    std::uint64_t q = 1;
    std::int64_t a = 0;
    std::complex<double> value;
    double magnitude = 0.0;
    double normalized = 0.0; // magnitude / sqrt(q)
};

/// e_q(k) for a residue k in [0, q).
inline std::complex<double> unit_root(std::uint64_t k, std::uint64_t q) {
    if (k == 0) return {1.0, 0.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(q);
    return {std::cos(angle), std::sin(angle)};
}

inline std::uint64_t reduce_frequency(std::int64_t a, std::uint64_t q) {
    const auto qs = static_cast<std::int64_t>(q);
    std::int64_t r = a % qs;
    if (r < 0) r += qs;
    return static_cast<std::uint64_t>(r);
}

/// Sum of fiber[u] * e_q(a u) in increasing u.
inline ExpSumRecord exp_sum_from_fibers(std::span<const std::uint32_t> fiber, std::uint64_t q, std::int64_t a) {
    ExpSumRecord r;
    r.q = q;
    r.a = a;
    const std::uint64_t freq = reduce_frequency(a, q);
    std::complex<double> acc{0.0, 0.0};
    for (std::uint64_t u = 0; u < fiber.size(); ++u) {
        if (fiber[u] == 0) continue;
        acc += static_cast<double>(fiber[u]) * unit_root(mul_mod(freq, u, q), q);
    }
    r.value = acc;
    r.magnitude = std::abs(acc);
    r.normalized = r.magnitude / std::sqrt(static_cast<double>(q));
    return r;
}

inline ExpSumRecord exp_sum_local(const LocalCurveData& d, std::int64_t a) {
    return exp_sum_from_fibers(d.fiber, d.p, a);
}

inline ExpSumRecord exp_sum_local(const BivariatePoly& f, std::uint64_t p, std::int64_t a) {
    return exp_sum_local(local_points(f, p), a);
}

/// Direct sum over Z_f(q) for a composite q within the enumeration budget.
inline ExpSumRecord exp_sum_global(const BivariatePoly& f, std::uint64_t q, std::int64_t a) {
    const auto fiber = fiber_counts_mod(f, q);
    return exp_sum_from_fibers(fiber, q, a);
}

enum class CrtForm {
    twisted, // local frequency a * (M/p)^{-1} mod p
    literal  // the same a at every prime
};

/// |global sum over Z_f(M_f(x)) - product of local sums| for each frequency.
/// The twisted form is the exact identity. The literal form only holds when
/// the twists happen to cancel and is kept for comparison.
inline std::vector<double> crt_identity_residuals(const BivariatePoly& f, const PrimeData& data,
                                                  std::span<const std::int64_t> frequencies,
                                                  CrtForm form = CrtForm::twisted) {
    const std::uint64_t m = modulus_within_budget(data.modulus);
    const auto fiber = fiber_counts_mod(f, m);
    const auto local = data.in_pf();
    std::vector<std::uint64_t> twist;
    for (const auto* d : local) twist.push_back(form == CrtForm::twisted ? inv_mod_prime((m / d->p) % d->p, d->p) : 1);
    std::vector<double> residuals;
    residuals.reserve(frequencies.size());
    for (const std::int64_t a : frequencies) {
        const auto global = exp_sum_from_fibers(fiber, m, a);
        std::complex<double> product{1.0, 0.0};
        for (std::size_t i = 0; i < local.size(); ++i) {
            const std::uint64_t p = local[i]->p;
            const auto freq = static_cast<std::int64_t>(mul_mod(reduce_frequency(a, p), twist[i], p));
            product *= exp_sum_local(*local[i], freq).value;
        }
        residuals.push_back(std::abs(global.value - product));
    }
    return residuals;
}

inline double crt_identity_check(const BivariatePoly& f, std::uint64_t x, std::int64_t a,
                                 CrtForm form = CrtForm::twisted) {
    const std::int64_t freq[] = {a};
    return crt_identity_residuals(f, primes_pf(f, x), freq, form).front();
}

/// Twenty fixed frequencies for checks over modulus m: small, negative and
/// wrapped-around values.
inline std::vector<std::int64_t> standard_frequencies(std::uint64_t m) {
    const auto ms = static_cast<std::int64_t>(m);
    return {0, 1, 2, 3, 4, 5, 6, 7, 11, 13, 17, 19, 23, -1, -2, -7, ms - 1, ms + 1, 2 * ms + 3, 7919};
}

struct BombieriEstimate {
    double c_hat = 0.0;
    std::uint64_t argmax_p = 0;
    std::int64_t argmax_a = 0;
    std::vector<std::uint64_t> primes_tested;
    std::vector<std::uint64_t> flagged; // primes whose largest normalized sum exceeds the threshold
};

/// Largest |S_a| / sqrt(p) over primes p in [p_min, p_max] with Z_f(p)
/// nonempty and 1 <= a < p. Whether f mod p has a factor U - alpha is not
/// checked; primes where the measured value exceeds `threshold` are listed in
/// `flagged` instead.
inline BombieriEstimate bombieri_constant(const BivariatePoly& f, std::uint64_t p_min, std::uint64_t p_max,
                                          std::optional<double> threshold = std::nullopt, unsigned jobs = 1) {
    if (p_min > p_max)
        throw DomainError("empty prime range [" + std::to_string(p_min) + ", " + std::to_string(p_max) + "]");
    std::vector<std::uint64_t> primes;
    for (auto p : primes_up_to(p_max))
        if (p >= p_min) primes.push_back(p);

    struct PerPrime {
        bool used = false;
        double best = 0.0;
        std::int64_t best_a = 0;
    };
    const auto per_prime = parallel_map(primes.size(), jobs, [&](std::size_t i) {
        PerPrime out;
        const auto d = local_points(f, primes[i]);
        if (!d.in_pf) return out;
        out.used = true;
        for (std::uint64_t a = 1; a < d.p; ++a) {
            const double v = exp_sum_local(d, static_cast<std::int64_t>(a)).normalized;
            if (v > out.best) {
                out.best = v;
                out.best_a = static_cast<std::int64_t>(a);
            }
        }
        return out;
    });

    BombieriEstimate est;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (!per_prime[i].used) continue;
        est.primes_tested.push_back(primes[i]);
        if (per_prime[i].best > est.c_hat || est.argmax_p == 0) {
            est.c_hat = per_prime[i].best;
            est.argmax_p = primes[i];
            est.argmax_a = per_prime[i].best_a;
        }
        if (threshold && per_prime[i].best > *threshold) est.flagged.push_back(primes[i]);
    }
    if (est.primes_tested.empty())
        throw DomainError("no prime of P_f in [" + std::to_string(p_min) + ", " + std::to_string(p_max) + "]");
    return est;
}

struct ParsevalCheck {
    double lhs = 0.0;
    std::uint64_t rhs = 0;
    double residual = 0.0;
};

/// sum_{a=0}^{p-1} |S_a|^2 against p * sum_u r(u)^2, r(u) the fiber sizes.
inline ParsevalCheck parseval_check(const LocalCurveData& d) {
    ParsevalCheck c;
    for (std::uint64_t a = 0; a < d.p; ++a) c.lhs += std::norm(exp_sum_local(d, static_cast<std::int64_t>(a)).value);
    std::uint64_t squares = 0;
    for (auto r : d.fiber) squares += std::uint64_t{r} * r;
    c.rhs = d.p * squares;
    c.residual = std::abs(c.lhs - static_cast<double>(c.rhs));
    return c;
}

inline ParsevalCheck parseval_check(const BivariatePoly& f, std::uint64_t p) {
    return parseval_check(local_points(f, p));
}

struct CongruenceCount {
    std::uint64_t t = 0;
    double main_term = 0.0;
    double deviation = 0.0; // |t - main_term| / sqrt(M_f(x))
};

/// Solutions of f(n,m) = 0 mod M_f(x) with 0 <= n < n_bound, 0 <= m < M_f(x).
inline CongruenceCount congruence_count(const BivariatePoly& f, std::uint64_t n_bound, const PrimeData& data) {
    const std::uint64_t m = modulus_within_budget(data.modulus);
    if (n_bound < 1 || n_bound > m)
        throw DomainError("n_bound must lie in [1, " + std::to_string(m) + "], got " + std::to_string(n_bound));
    const auto fiber = fiber_counts_mod(f, m);
    CongruenceCount c;
    std::uint64_t total = 0;
    for (std::uint64_t n = 0; n < m; ++n) {
        total += fiber[n];
        if (n < n_bound) c.t += fiber[n];
    }
    c.main_term = static_cast<double>(n_bound) * static_cast<double>(total) / static_cast<double>(m);
    c.deviation = std::abs(static_cast<double>(c.t) - c.main_term) / std::sqrt(static_cast<double>(m));
    return c;
}

inline CongruenceCount congruence_count(const BivariatePoly& f, std::uint64_t n_bound, std::uint64_t x) {
    return congruence_count(f, n_bound, primes_pf(f, x));
}

} // namespace pseudopoints
