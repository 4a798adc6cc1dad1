#include <gtest/gtest.h>

#include <cmath>

#include <pseudopoints/sieve.hpp>

#include "oracles.hpp"

using namespace pseudopoints;

namespace {

SearchConfig plain(const std::string& curve, std::uint64_t x) {
    SearchConfig c;
    c.curve = parse_poly(curve);
    c.x = x;
    return c;
}

} // namespace

TEST(Sieve, SegmentKeepsAdmissibleResidues) {
    BitVector odd(2);
    odd.set(1);
    BitVector nonzero(3, true);
    nonzero.reset(0);
    const std::vector<ResidueConstraint> cs{{2, odd}, {3, nonzero}};
    EXPECT_EQ(sieve_segment(0, 12, cs), (std::vector<std::uint64_t>{1, 5, 7, 11}));
    EXPECT_EQ(sieve_segment(100, 8, cs), (std::vector<std::uint64_t>{101, 103, 107}));
}

TEST(Sieve, PseudosquareSmallestPseudopoints) {
    const auto& o = oracle::curve("U - V^2");
    for (auto [x, n] : {std::pair<std::uint64_t, int>{3, 3}, {5, 6}, {7, 15}}) {
        const auto r = find_pseudopoints(plain("U - V^2", x));
        ASSERT_TRUE(r.found()) << x;
        EXPECT_EQ(r.certificates.front().n, n);
        EXPECT_EQ(oracle::pseudopoints(o.fn, x, 1000, 1000).front(), n);
        EXPECT_TRUE(verify_certificate(r.certificates.front(), true).ok);
    }
}

TEST(Sieve, CorpusMatchesOracleWithinPeriod) {
    for (const auto& c : oracle::corpus()) {
        const auto f = parse_poly(c.text);
        if (f.deg_v() < 2) continue;
        for (std::uint64_t x : {2, 3, 5, 7}) {
            const auto data = primes_pf(f, x);
            if (data.modulus.m_value > 10000) continue;
            const auto m = data.modulus.m_value.convert_to<std::int64_t>();
            auto cfg = plain(c.text, x);
            cfg.count_wanted = 5;
            const auto r = find_pseudopoints(cfg, data.local);
            std::vector<std::int64_t> got;
            for (const auto& cert : r.certificates) {
                got.push_back(cert.n.convert_to<std::int64_t>());
                EXPECT_LT(cert.n, data.modulus.m_value);
                const auto check = verify_certificate(cert, true);
                EXPECT_TRUE(check.ok) << c.text << " n=" << cert.n << ": "
                                      << (check.failures.empty() ? "" : check.failures.front());
            }
            // Local solvability by direct search; integer roots by scanning up to the Cauchy bound.
            const auto ps = oracle::pf(c.fn, x);
            std::vector<std::int64_t> want;
            for (std::int64_t n = 0; n < m && want.size() < 5; ++n) {
                bool ok = true;
                for (auto p : ps) {
                    bool solvable = false;
                    for (std::uint64_t v = 0; v < p && !solvable; ++v) solvable = oracle::mod(c.fn(n, v), p) == 0;
                    ok = ok && solvable;
                }
                if (!ok) continue;
                const auto g = specialize_u(f, n);
                if (g.is_zero()) continue;
                const auto bound = static_cast<std::int64_t>(integer_roots(g).record.cauchy_bound);
                if (!oracle::integer_root_scan(c.fn, n, bound)) want.push_back(n);
            }
            EXPECT_EQ(got, want) << c.text << " x=" << x;
        }
    }
}

TEST(Sieve, SurvivorsShrinkAsXGrows) {
    // Residue survivors below a fixed ceiling can only lose members when a prime is added.
    std::uint64_t last = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t x : {3, 5, 7}) {
        auto cfg = plain("U - V^2", x);
        cfg.n_ceiling = BigInt(2000);
        cfg.count_wanted = 1'000'000;
        const auto r = find_pseudopoints(cfg);
        EXPECT_LE(r.survivors, last);
        last = r.survivors;
    }
}

TEST(Sieve, PseudopointBelowModulus) {
    for (std::uint64_t x : {3, 5, 7, 11, 13}) {
        const auto r = find_pseudopoints(plain("U - V^2", x));
        ASSERT_TRUE(r.found());
        EXPECT_LT(r.certificates.front().n, r.period);
    }
}

TEST(Sieve, ParallelRunsAreIdentical) {
    for (std::uint64_t x : {5, 7, 11}) {
        auto cfg = plain("V^2 - U^3 - 1", x);
        cfg.count_wanted = 20;
        cfg.chunk = 64;
        const auto serial = find_pseudopoints(cfg);
        cfg.jobs = 8;
        const auto parallel = find_pseudopoints(cfg);
        EXPECT_EQ(serial.certificates, parallel.certificates);
        EXPECT_EQ(serial.survivors, parallel.survivors);
        EXPECT_EQ(serial.disqualified, parallel.disqualified);
    }
}

TEST(Lehmer, PseudosquaresMatchOracle) {
    for (auto [x, n] : {std::pair<std::uint64_t, int>{3, 73}, {5, 241}, {7, 1009}}) {
        const auto r = lehmer_pseudosquares(x);
        ASSERT_TRUE(r.found());
        EXPECT_EQ(r.certificates.front().n, n);
        EXPECT_EQ(oracle::lehmer(x), n);
        EXPECT_TRUE(verify_certificate(r.certificates.front()).ok);
    }
    EXPECT_EQ(lehmer_pseudosquares(11).certificates.front().n, oracle::lehmer(11));
}

TEST(Lehmer, CeilingCanExcludeEverything) {
    const auto r = lehmer_pseudosquares(7, BigInt(1009));
    EXPECT_FALSE(r.found());
}

TEST(Pseudopower, BaseTwo) {
    EXPECT_EQ(pseudopowers(2, 3).certificates.front().n, 5);
    EXPECT_EQ(pseudopowers(2, 5).certificates.front().n, 7);
    EXPECT_EQ(oracle::pseudopower(2, 3), 5);
    EXPECT_EQ(oracle::pseudopower(2, 5), 7);
    for (std::uint64_t x : {7, 11, 13})
        EXPECT_EQ(pseudopowers(2, x).certificates.front().n, oracle::pseudopower(2, x)) << x;
    EXPECT_EQ(pseudopowers(3, 7).certificates.front().n, oracle::pseudopower(3, 7));
}

TEST(Pseudopower, TruePowersAreDisqualified) {
    // 1, 2 and 4 pass every residue test for x = 3 but are powers of 2.
    const auto r = pseudopowers(2, 3);
    EXPECT_GE(r.disqualified, 3u);
    for (const auto& c : r.certificates) EXPECT_NE(c.n, 4);
    EXPECT_TRUE(verify_certificate(r.certificates.front()).ok);
}

TEST(Certificates, TamperingIsDetected) {
    const auto good = find_pseudopoints(plain("U - V^2", 7)).certificates.front();
    ASSERT_TRUE(verify_certificate(good).ok);

    auto wrong_n = good;
    wrong_n.n = 16;
    EXPECT_FALSE(verify_certificate(wrong_n).ok);

    auto wrong_witness = good;
    wrong_witness.witnesses[1].m += 1;
    EXPECT_FALSE(verify_certificate(wrong_witness).ok);

    auto dropped_prime = good;
    dropped_prime.primes.pop_back();
    dropped_prime.witnesses.pop_back();
    EXPECT_TRUE(verify_certificate(dropped_prime).ok);
    EXPECT_FALSE(verify_certificate(dropped_prime, true).ok);

    auto edited = good;
    std::get<RootExclusion>(edited.exclusion).candidates.clear();
    EXPECT_FALSE(verify_certificate(edited).ok);

    auto power = pseudopowers(2, 5).certificates.front();
    power.n = 8;
    EXPECT_FALSE(verify_certificate(power).ok);
}

TEST(SearchConfig, RejectsInvalidInput) {
    EXPECT_THROW(find_pseudopoints(plain("U - V", 5)), DomainError);
    EXPECT_THROW(find_pseudopoints(plain("U - V^2", 1)), DomainError);
    EXPECT_THROW(lehmer_pseudosquares(2), DomainError);
    EXPECT_THROW(pseudopowers(1, 5), DomainError);
    EXPECT_THROW(pseudopowers(-1, 5), DomainError);
}

TEST(Scaling, PseudosquareRatios) {
    const auto rows = scaling_table(parse_poly("U - V^2"), {3, 5, 7});
    ASSERT_EQ(rows.size(), 3u);
    const double want[] = {0.6131471927654585, 0.5268025545616606, 0.5064514198649092};
    const int n[] = {3, 6, 15};
    const int m[] = {6, 30, 210};
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(rows[i].n, n[i]);
        EXPECT_EQ(rows[i].m_value, m[i]);
        EXPECT_NEAR(rows[i].ratio, std::log(double(n[i])) / std::log(double(m[i])), 1e-12);
        EXPECT_NEAR(rows[i].ratio, want[i], 1e-3);
        EXPECT_LT(rows[i].ratio, 0.75);
    }
    EXPECT_TRUE(std::isnan(log_ratio(1, 6)));
}
