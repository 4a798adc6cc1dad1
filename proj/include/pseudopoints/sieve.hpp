#pragma once

// Search for x-pseudopoints: integers n that lift to a point of f modulo every
// prime of P_f(x) while f(n, V) has no integer root. Also the classical
// special cases, Lehmer pseudosquares and pseudopowers to a base g.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bigint.hpp"
#include "bitvector.hpp"
#include "error.hpp"
#include "localdata.hpp"
#include "modarith.hpp"
#include "parallel.hpp"
#include "polyring.hpp"
#include "roots.hpp"

namespace pseudopoints {

/// Default ceiling of the pseudosquare and pseudopower modes. Their residue
/// survivors below one period can all be true squares or powers (the first
/// 3-pseudosquare, 73, exceeds the period 24), so the scan runs on until found.
inline const BigInt kUnboundedCeiling = BigInt(std::numeric_limits<std::uint64_t>::max());

enum class SearchMode { plain, lehmer, pseudopower };

inline const char* to_string(SearchMode mode) {
    switch (mode) {
    case SearchMode::plain: return "plain";
    case SearchMode::lehmer: return "lehmer";
    case SearchMode::pseudopower: return "pseudopower";
    }
    return "?";
}

struct SearchConfig {
    BivariatePoly curve;               // ignored in pseudopower mode
    std::uint64_t x = 2;
    std::optional<BigInt> n_ceiling;   // exclusive; plain mode defaults to M_f(x)
    SearchMode mode = SearchMode::plain;
    BigInt base = 0;                   // pseudopower mode only
    std::size_t count_wanted = 1;
    std::size_t chunk = std::size_t{1} << 16;
    unsigned jobs = 1;
};

/// A local witness: m with f(n, m) = 0 mod p, or the exponent k with
/// g^k = n mod p in pseudopower mode.
struct Witness {
    std::uint64_t p = 0;
    BigInt m;

    friend bool operator==(const Witness&, const Witness&) = default;
};

/// n is not g^k: every power g^0..g^max_exponent has absolute value at most n
/// and differs from n, and |g|^(max_exponent+1) > n.
struct PowerExclusion {
    std::uint64_t max_exponent = 0;

    friend bool operator==(const PowerExclusion&, const PowerExclusion&) = default;
};

struct PseudopointCertificate {
    SearchMode mode = SearchMode::plain;
    BivariatePoly curve;
    BigInt base = 0;
    BigInt n;
    std::uint64_t x = 0;
    std::vector<std::uint64_t> primes;
    std::vector<Witness> witnesses;
    std::variant<RootExclusion, PowerExclusion> exclusion;

    friend bool operator==(const PseudopointCertificate&, const PseudopointCertificate&) = default;
};

struct SearchResult {
    std::vector<PseudopointCertificate> certificates;
    BigInt ceiling;
    BigInt period;                  // product of the sieve moduli
    std::uint64_t survivors = 0;    // residue survivors examined exactly
    std::uint64_t disqualified = 0; // survivors ruled out by an integer point / true power

    bool found() const noexcept { return !certificates.empty(); }
};

/// n survives modulus q iff allowed.test(n mod q).
struct ResidueConstraint {
    std::uint64_t modulus = 1;
    BitVector allowed;
    std::vector<std::uint64_t> forbidden;

    ResidueConstraint() = default;
    ResidueConstraint(std::uint64_t q, BitVector ok) : modulus(q), allowed(std::move(ok)) {
        for (std::uint64_t r = 0; r < q; ++r)
            if (!allowed.test(r)) forbidden.push_back(r);
    }
};

/// Survivors in [lo, lo + len): every n whose residue is allowed by all constraints.
/// Forbidden classes are struck out with stride q.
inline std::vector<std::uint64_t> sieve_segment(std::uint64_t lo, std::size_t len,
                                                const std::vector<ResidueConstraint>& constraints) {
    BitVector alive(len, true);
    for (const auto& c : constraints) {
        const std::uint64_t offset = lo % c.modulus;
        for (const std::uint64_t r : c.forbidden) {
            std::uint64_t start = (r + c.modulus - offset) % c.modulus;
            for (std::uint64_t i = start; i < len; i += c.modulus) alive.reset(i);
        }
    }
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < len; ++i)
        if (alive.test(i)) out.push_back(lo + i);
    return out;
}

/// Walks [start, ceiling) segment by segment (segments of one batch run in
/// parallel) and hands survivors to `accept` in increasing order until it
/// returns false or the range is exhausted.
template <class Accept>
void scan_survivors(std::uint64_t start, const BigInt& ceiling, const std::vector<ResidueConstraint>& constraints,
                    std::size_t chunk, unsigned jobs, Accept&& accept) {
    if (chunk == 0) throw DomainError("sieve chunk must be positive");
    const std::uint64_t limit = ceiling > std::numeric_limits<std::uint64_t>::max()
                                    ? std::numeric_limits<std::uint64_t>::max()
                                    : ceiling.convert_to<std::uint64_t>();
    const unsigned batch = jobs == 0 ? 1 : jobs;
    std::uint64_t lo = start;
    while (lo < limit) {
        std::vector<std::pair<std::uint64_t, std::size_t>> segments;
        for (unsigned s = 0; s < batch && lo < limit; ++s) {
            const std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(chunk, limit - lo));
            segments.emplace_back(lo, len);
            lo += len;
        }
        const auto found = parallel_map(segments.size(), jobs, [&](std::size_t i) {
            return sieve_segment(segments[i].first, segments[i].second, constraints);
        });
        for (const auto& seg : found)
            for (const std::uint64_t n : seg)
                if (!accept(n)) return;
    }
}

namespace detail {

inline BivariatePoly pseudosquare_curve() { return parse_poly("U - V^2"); }

/// Powers g^k mod p with the smallest exponent producing each residue.
inline std::vector<std::optional<std::uint64_t>> power_residues(const BigInt& g, std::uint64_t p) {
    std::vector<std::optional<std::uint64_t>> exponent(p);
    const std::uint64_t gp = mod_u64(g, p);
    std::uint64_t cur = 1 % p;
    for (std::uint64_t k = 0;; ++k) {
        if (exponent[cur]) break;
        exponent[cur] = k;
        cur = mul_mod(cur, gp, p);
    }
    return exponent;
}

/// Largest k with |g|^k <= n, and whether g^j == n for some j <= k.
inline std::pair<std::uint64_t, bool> scan_powers(const BigInt& g, const BigInt& n) {
    BigInt power = 1;
    std::uint64_t k = 0;
    bool hit = power == n;
    while (true) {
        BigInt next = power * g;
        if (big_abs(next) > n) break;
        power = std::move(next);
        ++k;
        hit = hit || power == n;
    }
    return {k, hit};
}

inline void check_config(const SearchConfig& config) {
    if (config.x < 2) throw DomainError("sieve limit x must be at least 2");
    if (config.n_ceiling && *config.n_ceiling < 1) throw DomainError("search ceiling must be at least 1");
    if (config.count_wanted == 0) throw DomainError("count must be at least 1");
    switch (config.mode) {
    case SearchMode::plain:
        if (config.curve.deg_v() < 2)
            throw DomainError("plain search needs deg_V f >= 2, got " + std::to_string(config.curve.deg_v()));
        break;
    case SearchMode::lehmer:
        if (config.x < 3) throw DomainError("pseudosquare search needs x >= 3");
        break;
    case SearchMode::pseudopower:
        if (big_abs(config.base) < 2) throw DomainError("pseudopower base must satisfy |g| >= 2");
        break;
    }
}

} // namespace detail

/// Plain-mode search given precomputed local records for every prime p <= x.
inline SearchResult find_pseudopoints(const SearchConfig& config, const std::vector<LocalCurveData>& local) {
    detail::check_config(config);
    SearchResult result;

    std::vector<ResidueConstraint> constraints;
    std::vector<std::uint64_t> primes;
    // Per sieve prime, a function giving the certificate witness for n.
    std::vector<std::function<BigInt(const BigInt&)>> witness_of;
    std::uint64_t start = 0;
    BivariatePoly curve = config.curve;
    result.period = 1;

    switch (config.mode) {
    case SearchMode::plain:
        for (const auto& d : local) {
            if (!d.in_pf) continue;
            constraints.emplace_back(d.p, d.admissible);
            primes.push_back(d.p);
            witness_of.push_back([&d](const BigInt& n) { return BigInt(*d.witness_for(mod_u64(n, d.p))); });
            result.period *= d.p;
        }
        break;
    case SearchMode::lehmer: {
        curve = detail::pseudosquare_curve();
        BitVector one_mod_8(8);
        one_mod_8.set(1);
        constraints.emplace_back(8, one_mod_8);
        result.period = 8;
        for (const auto p : primes_up_to(config.x)) {
            if (p == 2) continue;
            BitVector residues(p);
            for (std::uint64_t r = 1; r < p; ++r)
                if (legendre(r, p) == 1) residues.set(r);
            constraints.emplace_back(p, residues);
            primes.push_back(p);
            witness_of.push_back([p](const BigInt& n) {
                const auto root = *sqrt_mod(mod_u64(n, p), p);
                return BigInt(std::min(root, p - root));
            });
            result.period *= p;
        }
        break;
    }
    case SearchMode::pseudopower:
        start = 1;
        for (const auto p : primes_up_to(config.x)) {
            auto exps = std::make_shared<std::vector<std::optional<std::uint64_t>>>(
                detail::power_residues(config.base, p));
            BitVector residues(p);
            for (std::uint64_t r = 0; r < p; ++r)
                if ((*exps)[r]) residues.set(r);
            constraints.emplace_back(p, residues);
            primes.push_back(p);
            witness_of.push_back([exps, p](const BigInt& n) { return BigInt(*(*exps)[mod_u64(n, p)]); });
            result.period *= p;
        }
        break;
    }

    if (config.n_ceiling)
        result.ceiling = *config.n_ceiling;
    else if (config.mode == SearchMode::plain)
        result.ceiling = result.period;
    else
        result.ceiling = kUnboundedCeiling;

    scan_survivors(start, result.ceiling, constraints, config.chunk, config.jobs, [&](std::uint64_t raw) {
        const BigInt n = raw;
        ++result.survivors;
        PseudopointCertificate cert;
        cert.mode = config.mode;
        cert.x = config.x;
        cert.n = n;
        if (config.mode == SearchMode::pseudopower) {
            cert.base = config.base;
            const auto [k, hit] = detail::scan_powers(config.base, n);
            if (hit) {
                ++result.disqualified;
                return true;
            }
            cert.exclusion = PowerExclusion{k};
        } else {
            cert.curve = curve;
            const auto g = specialize_u(curve, n);
            if (g.is_zero()) {
                ++result.disqualified;
                return true;
            }
            auto found = integer_roots(g);
            if (!found.roots.empty()) {
                ++result.disqualified;
                return true;
            }
            cert.exclusion = std::move(found.record);
        }
        cert.primes = primes;
        for (std::size_t i = 0; i < primes.size(); ++i) cert.witnesses.push_back({primes[i], witness_of[i](n)});
        result.certificates.push_back(std::move(cert));
        return result.certificates.size() < config.count_wanted;
    });
    return result;
}

inline SearchResult find_pseudopoints(const SearchConfig& config) {
    detail::check_config(config);
    if (config.mode != SearchMode::plain) return find_pseudopoints(config, {});
    return find_pseudopoints(config, primes_pf(config.curve, config.x, config.jobs).local);
}

/// Smallest nonsquare n = 1 mod 8 with (n/p) = 1 for every odd prime p <= x.
inline SearchResult lehmer_pseudosquares(std::uint64_t x, std::optional<BigInt> n_ceiling = std::nullopt,
                                         std::size_t count = 1, unsigned jobs = 1) {
    SearchConfig c;
    c.mode = SearchMode::lehmer;
    c.x = x;
    c.n_ceiling = std::move(n_ceiling);
    c.count_wanted = count;
    c.jobs = jobs;
    return find_pseudopoints(c);
}

/// Smallest n > 0, not a power of g, that is a power of g modulo every prime p <= x.
inline SearchResult pseudopowers(const BigInt& g, std::uint64_t x, std::optional<BigInt> n_ceiling = std::nullopt,
                                 std::size_t count = 1, unsigned jobs = 1) {
    SearchConfig c;
    c.mode = SearchMode::pseudopower;
    c.base = g;
    c.x = x;
    c.n_ceiling = std::move(n_ceiling);
    c.count_wanted = count;
    c.jobs = jobs;
    return find_pseudopoints(c);
}

/// Re-checks a certificate from its own contents. Local data is not
/// recomputed, so in plain mode the prime list itself is taken on trust
/// unless `recheck_primes` is set, which recomputes P_f(x).
struct CertificateCheck {
    bool ok = true;
    std::vector<std::string> failures;

    void fail(std::string why) {
        ok = false;
        failures.push_back(std::move(why));
    }
};

inline CertificateCheck verify_certificate(const PseudopointCertificate& cert, bool recheck_primes = false) {
    CertificateCheck check;
    const std::string n_text = to_decimal(cert.n);

    for (std::size_t i = 0; i < cert.primes.size(); ++i) {
        const auto p = cert.primes[i];
        if (!is_prime(p) || p > cert.x) check.fail("listed modulus " + std::to_string(p) + " is not a prime <= x");
        if (i > 0 && cert.primes[i - 1] >= p) check.fail("prime list is not strictly increasing");
    }
    std::vector<std::uint64_t> expected;
    if (cert.mode == SearchMode::lehmer) {
        for (auto p : primes_up_to(cert.x))
            if (p != 2) expected.push_back(p);
    } else if (cert.mode == SearchMode::pseudopower) {
        expected = primes_up_to(cert.x);
    } else if (recheck_primes) {
        expected = primes_pf(cert.curve, cert.x).modulus.primes;
    } else {
        expected = cert.primes;
    }
    if (expected != cert.primes) check.fail("prime list differs from the primes the mode requires");

    if (cert.witnesses.size() != cert.primes.size()) {
        check.fail("witness count does not match prime count");
    } else {
        for (std::size_t i = 0; i < cert.witnesses.size(); ++i) {
            const auto& w = cert.witnesses[i];
            const std::string where = " at p=" + std::to_string(w.p);
            if (w.p != cert.primes[i]) check.fail("witness order does not match prime list" + where);
            if (cert.mode == SearchMode::pseudopower) {
                if (w.m < 0) {
                    check.fail("negative exponent" + where);
                    continue;
                }
                const BigInt lhs = boost::multiprecision::powm(
                    BigInt(mod_u64(cert.base, w.p)), w.m, BigInt(w.p));
                if (lhs != mod_u64(cert.n, w.p)) check.fail("g^k != n" + where);
            } else {
                if (mod_u64(eval(cert.curve, cert.n, w.m), w.p) != 0) check.fail("f(n, m) != 0" + where);
                if (cert.mode == SearchMode::lehmer && mod_u64(cert.n, w.p) == 0)
                    check.fail("p divides n" + where);
            }
        }
    }

    if (cert.mode == SearchMode::lehmer) {
        if (cert.curve != detail::pseudosquare_curve()) check.fail("pseudosquare certificate must use U - V^2");
        if (mod_u64(cert.n, 8) != 1) check.fail("n is not 1 mod 8");
    }

    if (cert.mode == SearchMode::pseudopower) {
        const auto* ex = std::get_if<PowerExclusion>(&cert.exclusion);
        if (cert.n < 1) check.fail("pseudopowers are positive");
        if (big_abs(cert.base) < 2) check.fail("base must satisfy |g| >= 2");
        if (!ex) {
            check.fail("pseudopower certificate lacks a power exclusion");
        } else if (check.ok) {
            const auto [k, hit] = detail::scan_powers(cert.base, cert.n);
            if (hit) check.fail(n_text + " is a power of the base");
            if (k != ex->max_exponent) check.fail("recorded exponent bound is wrong");
        }
        return check;
    }

    const auto* ex = std::get_if<RootExclusion>(&cert.exclusion);
    if (!ex) {
        check.fail("certificate lacks an integer-root exclusion");
        return check;
    }
    const auto g = specialize_u(cert.curve, cert.n);
    if (g.is_zero()) {
        check.fail("f(n, V) vanishes identically");
        return check;
    }
    if (ex->coefficients != g.coefficients()) check.fail("recorded f(n, V) does not match the curve");
    for (const auto& c : ex->candidates) {
        if (c.value == 0) check.fail("candidate " + to_decimal(c.m) + " is a root");
        if (g(c.m) != c.value) check.fail("candidate " + to_decimal(c.m) + " has a wrong recorded value");
    }
    const auto redo = integer_roots(g);
    if (!redo.roots.empty()) check.fail("f(" + n_text + ", V) has the integer root " + to_decimal(redo.roots.front()));
    if (redo.record != *ex) check.fail("exclusion record does not match a fresh root search");
    return check;
}

struct ScalingRow {
    std::uint64_t x = 0;
    std::size_t pi_pf = 0;
    BigInt m_value;
    BigInt n;
    double ratio = std::nan(""); // log N_f(x) / log M_f(x)
};

inline double log_ratio(const BigInt& n, const BigInt& m) {
    if (n <= 1 || m <= 1) return std::nan("");
    return log_big(n) / log_big(m);
}

/// One row per x: |P_f(x)|, M_f(x), N_f(x) and log N / log M.
inline std::vector<ScalingRow> scaling_table(const BivariatePoly& f, const std::vector<std::uint64_t>& xs,
                                             unsigned jobs = 1) {
    std::vector<ScalingRow> rows;
    for (const auto x : xs) {
        const auto data = primes_pf(f, x, jobs);
        SearchConfig c;
        c.curve = f;
        c.x = x;
        c.jobs = jobs;
        const auto result = find_pseudopoints(c, data.local);
        if (!result.found())
            throw DomainError("no " + std::to_string(x) + "-pseudopoint below " + to_decimal(result.ceiling) + " (" +
                              std::to_string(result.disqualified) + " survivors had integer points)");
        ScalingRow row;
        row.x = x;
        row.pi_pf = data.modulus.pi_pf;
        row.m_value = data.modulus.m_value;
        row.n = result.certificates.front().n;
        row.ratio = log_ratio(row.n, row.m_value);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace pseudopoints
