#include <gtest/gtest.h>

#include <cmath>

#include <pseudopoints/localdata.hpp>

#include "oracles.hpp"

using namespace pseudopoints;

namespace {

std::vector<std::uint64_t> admissible_list(const LocalCurveData& d) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t u = 0; u < d.p; ++u)
        if (d.admissible.test(u)) out.push_back(u);
    return out;
}

void expect_invariants(const BivariatePoly& f, const LocalCurveData& d) {
    std::uint64_t total = 0;
    for (std::uint64_t u = 0; u < d.p; ++u) {
        total += d.fiber[u];
        EXPECT_EQ(d.admissible.test(u), d.fiber[u] > 0);
        if (d.admissible.test(u)) {
            const auto m = d.witness_for(u);
            ASSERT_TRUE(m.has_value());
            EXPECT_EQ(mod_u64(eval(f, u, *m), d.p), 0u) << "u=" << u;
        } else {
            EXPECT_FALSE(d.witness_for(u).has_value());
        }
    }
    EXPECT_EQ(total, d.point_count);
    EXPECT_EQ(d.in_pf, d.point_count >= 1);
}

} // namespace

TEST(LocalPoints, PseudosquareModThree) {
    const auto d = local_points(parse_poly("U - V^2"), 3);
    EXPECT_EQ(d.point_count, 3u);
    EXPECT_EQ(admissible_list(d), (std::vector<std::uint64_t>{0, 1}));
    EXPECT_TRUE(d.in_pf);
    EXPECT_EQ(d.weil_slack, 0.0);
}

TEST(LocalPoints, EllipticModFive) {
    // Oracle: double loop over [0,5)^2 gives 5 points over u in {0, 2, 4}.
    const auto d = local_points(parse_poly("V^2 - U^3 - 1"), 5);
    EXPECT_EQ(d.point_count, 5u);
    EXPECT_EQ(admissible_list(d), (std::vector<std::uint64_t>{0, 2, 4}));
    EXPECT_EQ(oracle::count(oracle::curve("V^2 - U^3 - 1").fn, 5), 5u);
}

TEST(LocalPoints, EmptyConicModTwo) {
    const auto f = parse_poly("U^2 + U + V^2 + V + 1");
    const auto d = local_points(f, 2);
    EXPECT_EQ(d.point_count, 0u);
    EXPECT_FALSE(d.in_pf);
    EXPECT_EQ(d.admissible.count(), 0u);
    EXPECT_EQ(oracle::count(oracle::curve("U^2 + U + V^2 + V + 1").fn, 2), 0u);
}

TEST(LocalPoints, DegenerateReductionIsFlagged) {
    const auto d = local_points(parse_poly("3*U + 3*V^2"), 3);
    EXPECT_TRUE(d.degenerate);
    EXPECT_FALSE(d.in_pf);
    EXPECT_EQ(d.point_count, 0u);
    const auto data = primes_pf(parse_poly("3*U + 3*V^2"), 7);
    EXPECT_EQ(data.modulus.degenerate_primes, (std::vector<std::uint64_t>{3}));
    EXPECT_EQ(data.modulus.primes, (std::vector<std::uint64_t>{2, 5, 7}));
}

TEST(LocalPoints, VanishingFiberCountsEveryV) {
    // f(0, V) = 0 identically, so u = 0 contributes p points.
    const auto f = parse_poly("U*V^2 - U");
    const auto d = local_points(f, 7);
    EXPECT_EQ(d.fiber[0], 7u);
    expect_invariants(f, d);
    EXPECT_EQ(d.point_count, oracle::count([](oracle::i128 u, oracle::i128 v) { return u * v * v - u; }, 7));
}

TEST(LocalPoints, RejectsBadPrimes) {
    EXPECT_THROW(local_points(parse_poly("U - V^2"), 9), DomainError);
    EXPECT_THROW(local_points(parse_poly("U - V^2"), 1'000'003), BudgetError);
}

TEST(LocalPoints, MatchesOracleAndFastPathMatchesNaive) {
    for (const auto& c : oracle::corpus()) {
        const auto f = parse_poly(c.text);
        for (auto p : oracle::primes(2, 200)) {
            const auto fast = local_points(f, p);
            const auto naive = local_points(f, p, CountMethod::naive);
            EXPECT_EQ(fast, naive) << c.text << " p=" << p;
            const auto fib = oracle::fibers(c.fn, p);
            for (std::uint64_t u = 0; u < p; ++u) ASSERT_EQ(fast.fiber[u], fib[u]) << c.text << " p=" << p;
            expect_invariants(f, fast);
            // Each u contributes at most deg_v roots unless f(u, V) vanishes mod p.
            EXPECT_LE(fast.admissible.count(), fast.point_count);
            bool vanishing_fiber = false;
            for (std::uint64_t u = 0; u < p; ++u) vanishing_fiber |= fast.fiber[u] == p && f.deg_v() < p;
            if (!vanishing_fiber) EXPECT_LE(fast.point_count, std::uint64_t{f.deg_v()} * p);
        }
    }
}

TEST(PrimesPf, Examples) {
    const auto a = primes_pf(parse_poly("U - V^2"), 10);
    EXPECT_EQ(a.modulus.primes, (std::vector<std::uint64_t>{2, 3, 5, 7}));
    EXPECT_EQ(a.modulus.m_value, 210);
    EXPECT_EQ(a.modulus.pi_pf, 4u);

    const auto b = primes_pf(parse_poly("U^2 + U + V^2 + V + 1"), 10);
    EXPECT_EQ(b.modulus.primes, (std::vector<std::uint64_t>{3, 5, 7}));
    EXPECT_EQ(b.modulus.m_value, 105);
    EXPECT_EQ(b.modulus.primes, oracle::pf(oracle::curve("U^2 + U + V^2 + V + 1").fn, 10));

    const auto c = primes_pf(parse_poly("V^2 - U^3 - 1"), 1);
    EXPECT_TRUE(c.modulus.primes.empty());
    EXPECT_EQ(c.modulus.m_value, 1);

    EXPECT_THROW(primes_pf(parse_poly("U"), 0), DomainError);
}

TEST(PrimesPf, BigModulusIsExact) {
    const auto g = primes_pf(parse_poly("U - V^2"), 60).modulus;
    // Primorial 59# exceeds 64 bits.
    EXPECT_EQ(g.m_value, BigInt("1922760350154212639070"));
    EXPECT_EQ(g.pi_pf, 17u);
}

TEST(PrimesPf, ParallelMatchesSerial) {
    const auto f = parse_poly("V^2 - U^3 - U - 1");
    const auto serial = primes_pf(f, 300, 1);
    const auto parallel = primes_pf(f, 300, 8);
    EXPECT_EQ(serial.local, parallel.local);
    EXPECT_EQ(serial.modulus.m_value, parallel.modulus.m_value);
}

TEST(WeilCheck, Examples) {
    const auto w1 = weil_check(parse_poly("U - V^2"), 97, 2.0);
    EXPECT_TRUE(w1.passes);
    EXPECT_EQ(w1.slack, 0.0);
    const auto w2 = weil_check(parse_poly("V^2 - U^3 - 1"), 5, 2.0);
    EXPECT_TRUE(w2.passes);
    EXPECT_EQ(w2.slack, 0.0);
    const auto f = parse_poly("V^2 - U^3 - U - 1");
    for (auto p : oracle::primes(5, 200)) {
        const auto w = weil_check(f, p, 2.0);
        EXPECT_TRUE(w.passes) << p;
        const double n = static_cast<double>(oracle::count(oracle::curve("V^2 - U^3 - U - 1").fn, p));
        EXPECT_DOUBLE_EQ(w.slack, std::abs(n - p) / std::sqrt(p));
    }
    // A point-free prime fails when c is small.
    EXPECT_FALSE(weil_check(local_points(parse_poly("U^2 + U + V^2 + V + 1"), 2), 1.0).passes);
}

TEST(WeilCheck, DefaultConstantFromDegree) {
    EXPECT_EQ(default_weil_constant(parse_poly("U - V^2")), 2.0);
    EXPECT_EQ(default_weil_constant(parse_poly("V^2 - U^3 - 1")), 2.0);
    EXPECT_EQ(default_weil_constant(parse_poly("V^4 - U^3 - 1")), 6.0);
}

TEST(CountPointsMod, Examples) {
    EXPECT_EQ(count_points_mod(parse_poly("U - V^2"), 15), 15u);
    EXPECT_EQ(count_points_mod(parse_poly("U - V^2"), 1), 1u);
    const auto& e = oracle::curve("V^2 - U^3 - 1").fn;
    EXPECT_EQ(count_points_mod(parse_poly("V^2 - U^3 - 1"), 15), oracle::count(e, 3) * oracle::count(e, 5));
    EXPECT_EQ(count_points_mod(parse_poly("V^2 - U^3 - 1"), 15), 15u);
    EXPECT_THROW(count_points_mod(parse_poly("U - V^2"), 1'000'001), BudgetError);
    EXPECT_THROW(count_points_mod(parse_poly("U - V^2"), 0), DomainError);
}

TEST(ProductFormula, Examples) {
    const auto a = product_formula_check(parse_poly("U - V^2"), 5);
    EXPECT_EQ(a.lhs, 30);
    EXPECT_EQ(a.rhs, 30);
    EXPECT_TRUE(a.equal);

    // M = 15; oracle count 16 = 4 * 4.
    const auto b = product_formula_check(parse_poly("U^2 + U + V^2 + V + 1"), 5);
    EXPECT_EQ(b.lhs, 16);
    EXPECT_EQ(b.lhs, oracle::count(oracle::curve("U^2 + U + V^2 + V + 1").fn, 15));
    EXPECT_TRUE(b.equal);

    const auto c = product_formula_check(parse_poly("V^2 - U^3 - 1"), 3);
    EXPECT_EQ(c.lhs, 6);
    EXPECT_TRUE(c.equal);

    EXPECT_THROW(product_formula_check(parse_poly("U - V^2"), 19), BudgetError);
}

TEST(ProductFormula, HoldsForCorpusWithinBudget) {
    for (const auto& c : oracle::corpus()) {
        const auto f = parse_poly(c.text);
        for (std::uint64_t x : {2, 3, 5, 7}) {
            const auto data = primes_pf(f, x);
            if (data.modulus.m_value > 1000) continue;
            const auto r = product_formula_check(f, data);
            EXPECT_TRUE(r.equal) << c.text << " x=" << x;
            EXPECT_EQ(r.lhs, oracle::count(c.fn, data.modulus.m_value.convert_to<std::uint64_t>()));
        }
    }
}

TEST(PointCountExponent, MatchesOracleForCorpus) {
    for (const auto& c : oracle::corpus()) {
        const auto f = parse_poly(c.text);
        for (std::uint64_t x : {5, 7, 11}) {
            const auto e = point_count_exponent(primes_pf(f, x));
            const auto ps = oracle::pf(c.fn, x);
            double log_count = 0, log_m = 0;
            for (auto p : ps) {
                log_count += std::log(static_cast<double>(oracle::count(c.fn, p)));
                log_m += std::log(static_cast<double>(p));
            }
            ASSERT_FALSE(std::isnan(e.c0)) << c.text;
            EXPECT_NEAR(e.exponent, log_count / log_m, 1e-12) << c.text << " x=" << x;
            EXPECT_NEAR(e.c0, std::abs(log_count / log_m - 1.0) * std::sqrt(static_cast<double>(x)), 1e-12);
            RecordProperty(c.text + " x=" + std::to_string(x), std::to_string(e.c0));
        }
    }
    const auto e = point_count_exponent(primes_pf(parse_poly("V^2 - U^3 - 1"), 7));
    EXPECT_NEAR(e.exponent, std::log(330.0) / std::log(210.0), 1e-12);
    EXPECT_TRUE(std::isnan(point_count_exponent(primes_pf(parse_poly("V^2 - U^3 - 1"), 1)).exponent));
}
