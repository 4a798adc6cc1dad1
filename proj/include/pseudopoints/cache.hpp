#pragma once

// On-disk cache of LocalCurveData: one JSON object per line, keyed by the
// canonical curve text and the prime. Lines are written sorted by key, so the
// same set of records always produces the same file.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bitvector.hpp"
#include "error.hpp"
#include "localdata.hpp"
#include "polyring.hpp"

namespace pseudopoints {

inline nlohmann::json cache_line(const std::string& curve, const LocalCurveData& d) {
    nlohmann::json witnesses = nlohmann::json::array();
    nlohmann::json fibers = nlohmann::json::array();
    for (std::uint64_t u = 0; u < d.p; ++u) {
        if (!d.admissible.test(u)) continue;
        witnesses.push_back({u, d.witness[u]});
        fibers.push_back(d.fiber[u]);
    }
    return {{"curve", curve},
            {"p", d.p},
            {"point_count", d.point_count},
            {"admissible", d.admissible.to_hex()},
            {"witnesses", witnesses},
            {"fiber_sizes", fibers},
            {"degenerate", d.degenerate}};
}

/// Rebuilds a record from a cache line, re-deriving in_pf and weil_slack.
/// Throws DomainError when the line is inconsistent.
inline std::pair<std::string, LocalCurveData> parse_cache_line(const std::string& line) {
    try {
        const auto j = nlohmann::json::parse(line);
        LocalCurveData d;
        d.p = j.at("p").get<std::uint64_t>();
        if (!is_prime(d.p) || d.p > kEnumerationBudget) throw DomainError("bad prime in cache line");
        d.point_count = j.at("point_count").get<std::uint64_t>();
        d.admissible = BitVector::from_hex(j.at("admissible").get<std::string>(), d.p);
        d.degenerate = j.at("degenerate").get<bool>();
        d.witness.assign(d.p, kNoWitness);
        d.fiber.assign(d.p, 0);
        const auto& witnesses = j.at("witnesses");
        const auto& fibers = j.at("fiber_sizes");
        if (witnesses.size() != d.admissible.count() || fibers.size() != witnesses.size())
            throw DomainError("witness list does not match admissible set");
        std::uint64_t total = 0;
        for (std::size_t k = 0; k < witnesses.size(); ++k) {
            const auto u = witnesses[k].at(0).get<std::uint64_t>();
            const auto m = witnesses[k].at(1).get<std::uint32_t>();
            if (u >= d.p || !d.admissible.test(u) || m >= d.p) throw DomainError("witness out of range");
            d.witness[u] = m;
            d.fiber[u] = fibers[k].get<std::uint32_t>();
            total += d.fiber[u];
        }
        if (total != d.point_count) throw DomainError("fiber sizes do not sum to point_count");
        d.in_pf = d.point_count > 0;
        d.weil_slack = detail::weil_slack(d.point_count, d.p);
        return {j.at("curve").get<std::string>(), std::move(d)};
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("corrupt cache line: ") + e.what());
    }
}

class PointCache {
public:
    using Key = std::pair<std::string, std::uint64_t>;

    /// Reads `path`; a missing file is an empty cache. Corrupt lines are
    /// skipped and counted in warnings().
    static PointCache load(const std::string& path) {
        PointCache cache;
        std::ifstream in(path);
        if (!in) return cache;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                auto [curve, d] = parse_cache_line(line);
                cache.records_[{std::move(curve), d.p}] = std::move(d);
            } catch (const Error&) {
                ++cache.warnings_;
            }
        }
        return cache;
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw DomainError("cannot write cache file " + path);
        for (const auto& [key, d] : records_) out << cache_line(key.first, d).dump() << '\n';
    }

    std::optional<LocalCurveData> lookup(const BivariatePoly& f, std::uint64_t p) const {
        auto it = records_.find({render(f), p});
        if (it == records_.end()) return std::nullopt;
        return it->second;
    }

    void store(const BivariatePoly& f, const LocalCurveData& d) { records_[{render(f), d.p}] = d; }

    std::size_t size() const noexcept { return records_.size(); }
    std::size_t warnings() const noexcept { return warnings_; }

    /// Local data for every prime p <= x, computing (in parallel) only what
    /// the cache lacks.
    PrimeData prime_data(const BivariatePoly& f, std::uint64_t x, unsigned jobs) {
        if (x < 1) throw DomainError("x must be at least 1");
        const auto primes = primes_up_to(x);
        std::vector<std::uint64_t> missing;
        for (auto p : primes)
            if (!lookup(f, p)) missing.push_back(p);
        const auto fresh = parallel_map(missing.size(), jobs, [&](std::size_t i) { return local_points(f, missing[i]); });
        for (const auto& d : fresh) store(f, d);
        PrimeData out;
        for (auto p : primes) out.local.push_back(*lookup(f, p));
        out.modulus = assemble_modulus(x, out.local);
        return out;
    }

private:
    std::map<Key, LocalCurveData> records_;
    std::size_t warnings_ = 0;
};

/// Stores `records` under `curve` at `path`, then loads them back.
inline std::vector<LocalCurveData> cache_roundtrip(const std::string& path, const BivariatePoly& curve,
                                                   const std::vector<LocalCurveData>& records) {
    PointCache cache;
    for (const auto& d : records) cache.store(curve, d);
    cache.save(path);
    const auto loaded = PointCache::load(path);
    std::vector<LocalCurveData> out;
    for (const auto& d : records)
        if (auto hit = loaded.lookup(curve, d.p)) out.push_back(std::move(*hit));
    return out;
}

} // namespace pseudopoints
