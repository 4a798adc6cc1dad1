#pragma once

// Canonical JSON form of pseudopoint certificates. Big integers are decimal
// strings; keys are sorted so equal certificates serialize identically.

#include <string>
#include <string_view>

#include <json.hpp>

#include "bigint.hpp"
#include "error.hpp"
#include "polyring.hpp"
#include "sieve.hpp"

namespace pseudopoints {

inline constexpr std::string_view kToolVersion = "pseudopoints 1.0.0";

inline nlohmann::json to_json(const RootExclusion& ex) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : ex.coefficients) coeffs.push_back(to_decimal(c));
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& iv : ex.intervals)
        intervals.push_back({{"lo", to_decimal(iv.lo)}, {"hi", to_decimal(iv.hi)}, {"roots", iv.roots}});
    nlohmann::json candidates = nlohmann::json::array();
    for (const auto& c : ex.candidates) candidates.push_back({to_decimal(c.m), to_decimal(c.value)});
    return {{"kind", "integer_roots"},
            {"coefficients", coeffs},
            {"zero_multiplicity", ex.zero_multiplicity},
            {"cauchy_bound", to_decimal(ex.cauchy_bound)},
            {"intervals", intervals},
            {"candidates", candidates}};
}

inline nlohmann::json to_json(const PseudopointCertificate& cert) {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["mode"] = to_string(cert.mode);
    j["x"] = cert.x;
    j["n"] = to_decimal(cert.n);
    if (cert.mode == SearchMode::pseudopower)
        j["base"] = to_decimal(cert.base);
    else
        j["curve"] = render(cert.curve);
    j["primes"] = cert.primes;
    nlohmann::json witnesses = nlohmann::json::array();
    for (const auto& w : cert.witnesses) witnesses.push_back({std::to_string(w.p), to_decimal(w.m)});
    j["witnesses"] = witnesses;
    if (const auto* ex = std::get_if<RootExclusion>(&cert.exclusion))
        j["exclusion"] = to_json(*ex);
    else
        j["exclusion"] = {{"kind", "powers"}, {"max_exponent", std::get<PowerExclusion>(cert.exclusion).max_exponent}};
    j["status"] = "confirmed pseudopoint";
    return j;
}

inline std::string certificate_text(const PseudopointCertificate& cert) { return to_json(cert).dump(2) + "\n"; }

namespace detail {

inline BigInt big_field(const nlohmann::json& j, const char* key) {
    return from_decimal(j.at(key).get<std::string>());
}

inline SearchMode mode_from_string(const std::string& s) {
    if (s == "plain") return SearchMode::plain;
    if (s == "lehmer") return SearchMode::lehmer;
    if (s == "pseudopower") return SearchMode::pseudopower;
    throw DomainError("unknown certificate mode '" + s + "'");
}

} // namespace detail

/// Inverse of to_json. Throws DomainError on a malformed certificate.
inline PseudopointCertificate certificate_from_json(const nlohmann::json& j) {
    try {
        PseudopointCertificate cert;
        cert.mode = detail::mode_from_string(j.at("mode").get<std::string>());
        cert.x = j.at("x").get<std::uint64_t>();
        cert.n = detail::big_field(j, "n");
        if (cert.mode == SearchMode::pseudopower)
            cert.base = detail::big_field(j, "base");
        else
            cert.curve = parse_poly(j.at("curve").get<std::string>());
        cert.primes = j.at("primes").get<std::vector<std::uint64_t>>();
        for (const auto& w : j.at("witnesses"))
            cert.witnesses.push_back({std::stoull(w.at(0).get<std::string>()), from_decimal(w.at(1).get<std::string>())});
        const auto& ex = j.at("exclusion");
        if (ex.at("kind") == "powers") {
            cert.exclusion = PowerExclusion{ex.at("max_exponent").get<std::uint64_t>()};
        } else {
            RootExclusion r;
            for (const auto& c : ex.at("coefficients")) r.coefficients.push_back(from_decimal(c.get<std::string>()));
            r.zero_multiplicity = ex.at("zero_multiplicity").get<std::uint32_t>();
            r.cauchy_bound = detail::big_field(ex, "cauchy_bound");
            for (const auto& iv : ex.at("intervals"))
                r.intervals.push_back({detail::big_field(iv, "lo"), detail::big_field(iv, "hi"),
                                       iv.at("roots").get<std::uint32_t>()});
            for (const auto& c : ex.at("candidates"))
                r.candidates.push_back({from_decimal(c.at(0).get<std::string>()), from_decimal(c.at(1).get<std::string>())});
            cert.exclusion = std::move(r);
        }
        return cert;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed certificate: ") + e.what());
    } catch (const std::logic_error& e) {
        throw DomainError(std::string("malformed certificate: ") + e.what());
    }
}

} // namespace pseudopoints
