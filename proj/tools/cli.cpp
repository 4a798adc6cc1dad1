#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <pseudopoints/pseudopoints.hpp>

namespace pseudopoints::cli {
namespace {

struct RunConfig {
    std::string subcommand;
    std::string curve_text;
    std::uint64_t x = 0;
    std::vector<std::uint64_t> xs;
    std::string ceiling;
    std::size_t count = 1;
    std::int64_t base = 0;
    bool lehmer = false;
    std::string out_path;
    std::string format;
    std::string cache_path;
    unsigned jobs = 1;
    std::optional<double> weil_constant;
    std::optional<std::int64_t> frequency;
    bool global = false;
    std::string cert_path;
    bool recheck_primes = false;
};

/// Thrown for input problems found after CLI11 parsing (exit code 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a check or search reports a negative outcome (exit code 1);
/// the report itself has already been written.
struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Session {
public:
    Session(const RunConfig& cfg, std::ostream& err) : cfg_(cfg), err_(err) {
        if (!cfg_.cache_path.empty()) {
            cache_path_ = cfg_.cache_path;
        } else if (const char* dir = std::getenv(kCacheDirEnv); dir && *dir) {
            cache_path_ = std::string(dir) + "/local_points.jsonl";
        }
        if (cache_path_) {
            cache_ = PointCache::load(*cache_path_);
            if (cache_.warnings() > 0)
                err_ << "warning: skipped " << cache_.warnings() << " corrupt cache line(s) in " << *cache_path_ << "\n";
        }
    }

    BivariatePoly curve() const {
        if (cfg_.curve_text.empty()) throw UsageError("--curve is required");
        try {
            return parse_poly(cfg_.curve_text);
        } catch (const ParseError& e) {
            throw UsageError(std::string("cannot parse curve: ") + e.what());
        }
    }

    PrimeData prime_data(const BivariatePoly& f, std::uint64_t x) {
        if (x < 1) throw UsageError("--x must be at least 1");
        auto data = cache_.prime_data(f, x, cfg_.jobs);
        for (auto p : data.modulus.degenerate_primes)
            err_ << "warning: f vanishes identically mod " << p << "; prime excluded from P_f\n";
        return data;
    }

    void finish() const {
        if (cache_path_) cache_.save(*cache_path_);
    }

private:
    const RunConfig& cfg_;
    std::ostream& err_;
    std::optional<std::string> cache_path_;
    PointCache cache_;
};

std::optional<BigInt> parse_ceiling(const RunConfig& cfg) {
    if (cfg.ceiling.empty()) return std::nullopt;
    try {
        return from_decimal(cfg.ceiling);
    } catch (const Error& e) {
        throw UsageError(std::string("--ceiling: ") + e.what());
    }
}

std::string csv_bool(bool b) { return b ? "1" : "0"; }

// ---------------------------------------------------------------- local / mfx

void cmd_local(const RunConfig& cfg, Session& s, std::ostream& out) {
    const auto f = s.curve();
    const auto data = s.prime_data(f, cfg.x);
    if (cfg.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& d : data.local)
            rows.push_back({{"p", d.p},
                            {"point_count", d.point_count},
                            {"admissible", d.admissible.count()},
                            {"weil_slack", format_real(d.weil_slack)},
                            {"in_pf", d.in_pf},
                            {"degenerate", d.degenerate}});
        out << nlohmann::json{{"curve", render(f)}, {"x", cfg.x}, {"primes", rows}}.dump(2) << "\n";
        return;
    }
    out << "p,point_count,admissible,weil_slack,in_pf,degenerate\n";
    for (const auto& d : data.local)
        out << d.p << ',' << d.point_count << ',' << d.admissible.count() << ',' << format_real(d.weil_slack) << ','
            << csv_bool(d.in_pf) << ',' << csv_bool(d.degenerate) << "\n";
}

std::string join_primes(const std::vector<std::uint64_t>& primes) {
    std::string s;
    for (std::size_t i = 0; i < primes.size(); ++i) s += (i ? " " : "") + std::to_string(primes[i]);
    return s;
}

void cmd_mfx(const RunConfig& cfg, Session& s, std::ostream& out) {
    const auto f = s.curve();
    const auto g = s.prime_data(f, cfg.x).modulus;
    if (cfg.format == "json") {
        out << nlohmann::json{{"curve", render(f)},
                              {"x", g.x},
                              {"primes", g.primes},
                              {"degenerate_primes", g.degenerate_primes},
                              {"pi_pf", g.pi_pf},
                              {"m_value", to_decimal(g.m_value)},
                              {"log_m", format_real(log_big(g.m_value))}}
                   .dump(2)
            << "\n";
        return;
    }
    out << "x,pi_pf,m_value,log_m,primes,degenerate_primes\n";
    out << g.x << ',' << g.pi_pf << ',' << to_decimal(g.m_value) << ',' << format_real(log_big(g.m_value)) << ','
        << join_primes(g.primes) << ',' << join_primes(g.degenerate_primes) << "\n";
}

// ---------------------------------------------------------------- expsum

void cmd_expsum(const RunConfig& cfg, Session& s, std::ostream& out) {
    const auto f = s.curve();
    const auto data = s.prime_data(f, cfg.x);
    std::vector<ExpSumRecord> records;
    for (const auto* d : data.in_pf()) {
        if (cfg.frequency) {
            records.push_back(exp_sum_local(*d, *cfg.frequency));
            continue;
        }
        for (std::uint64_t a = 0; a < d->p; ++a) records.push_back(exp_sum_local(*d, static_cast<std::int64_t>(a)));
    }
    if (cfg.global) {
        const std::uint64_t m = modulus_within_budget(data.modulus);
        const auto fiber = fiber_counts_mod(f, m);
        const auto freqs = cfg.frequency ? std::vector<std::int64_t>{*cfg.frequency} : standard_frequencies(m);
        for (auto a : freqs) records.push_back(exp_sum_from_fibers(fiber, m, a));
    }
    if (cfg.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : records)
            rows.push_back({{"q", r.q},
                            {"a", r.a},
                            {"re", format_real(r.value.real())},
                            {"im", format_real(r.value.imag())},
                            {"magnitude", format_real(r.magnitude)},
                            {"normalized", format_real(r.normalized)}});
        out << rows.dump(2) << "\n";
        return;
    }
    out << "q,a,re,im,magnitude,normalized\n";
    for (const auto& r : records)
        out << r.q << ',' << r.a << ',' << format_real(r.value.real()) << ',' << format_real(r.value.imag()) << ','
            << format_real(r.magnitude) << ',' << format_real(r.normalized) << "\n";
}

// ---------------------------------------------------------------- searches

void emit_search(const RunConfig& cfg, const SearchResult& result, std::ostream& out, std::ostream& err) {
    if (cfg.format == "csv") {
        out << "n,x,mode,survivors,disqualified\n";
        for (const auto& c : result.certificates)
            out << to_decimal(c.n) << ',' << c.x << ',' << to_string(c.mode) << ',' << result.survivors << ','
                << result.disqualified << "\n";
    } else {
        nlohmann::json certs = nlohmann::json::array();
        for (const auto& c : result.certificates) certs.push_back(to_json(c));
        out << nlohmann::json{{"certificates", certs},
                              {"ceiling", to_decimal(result.ceiling)},
                              {"survivors", result.survivors},
                              {"disqualified", result.disqualified}}
                   .dump(2)
            << "\n";
    }
    if (!result.found()) {
        err << "no pseudopoint below " << to_decimal(result.ceiling) << " (" << result.survivors
            << " residue survivors, " << result.disqualified << " disqualified)\n";
        throw CheckFailed("no pseudopoint found");
    }
}

SearchConfig base_search(const RunConfig& cfg) {
    SearchConfig c;
    c.x = cfg.x;
    c.n_ceiling = parse_ceiling(cfg);
    c.count_wanted = cfg.count;
    c.jobs = cfg.jobs;
    return c;
}

void cmd_search(const RunConfig& cfg, Session& s, std::ostream& out, std::ostream& err) {
    SearchConfig c = base_search(cfg);
    if (cfg.lehmer && cfg.base != 0) throw UsageError("--lehmer and --base are mutually exclusive");
    if (cfg.lehmer) {
        c.mode = SearchMode::lehmer;
        emit_search(cfg, find_pseudopoints(c), out, err);
        return;
    }
    if (cfg.base != 0) {
        c.mode = SearchMode::pseudopower;
        c.base = cfg.base;
        emit_search(cfg, find_pseudopoints(c), out, err);
        return;
    }
    c.curve = s.curve();
    if (cfg.x < 2) throw UsageError("--x must be at least 2 for a search");
    const auto data = s.prime_data(c.curve, cfg.x);
    emit_search(cfg, find_pseudopoints(c, data.local), out, err);
}

void cmd_pseudosquare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    SearchConfig c = base_search(cfg);
    c.mode = SearchMode::lehmer;
    emit_search(cfg, find_pseudopoints(c), out, err);
}

void cmd_pseudopower(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    SearchConfig c = base_search(cfg);
    c.mode = SearchMode::pseudopower;
    c.base = cfg.base;
    emit_search(cfg, find_pseudopoints(c), out, err);
}

// ---------------------------------------------------------------- verify

struct CheckLine {
    std::string check;
    std::string subject;
    bool pass;
    std::string value;
};

void emit_checks(const RunConfig& cfg, const std::vector<CheckLine>& lines, std::ostream& out) {
    if (cfg.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& l : lines)
            rows.push_back({{"check", l.check}, {"subject", l.subject}, {"status", l.pass ? "pass" : "fail"}, {"value", l.value}});
        out << rows.dump(2) << "\n";
    } else {
        out << "check,subject,status,value\n";
        for (const auto& l : lines) out << l.check << ',' << l.subject << ',' << (l.pass ? "pass" : "fail") << ',' << l.value << "\n";
    }
    for (const auto& l : lines)
        if (!l.pass) throw CheckFailed("verification failed");
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
}

void verify_certificates(const RunConfig& cfg, std::ostream& out) {
    const auto doc = read_json_file(cfg.cert_path);
    std::vector<nlohmann::json> certs;
    if (doc.is_object() && doc.contains("certificates"))
        for (const auto& c : doc.at("certificates")) certs.push_back(c);
    else if (doc.is_array())
        for (const auto& c : doc) certs.push_back(c);
    else
        certs.push_back(doc);
    if (certs.empty()) throw DomainError(cfg.cert_path + " holds no certificate");

    std::vector<CheckLine> lines;
    for (const auto& j : certs) {
        const auto cert = certificate_from_json(j);
        const auto check = verify_certificate(cert, cfg.recheck_primes);
        std::string detail = "ok";
        if (!check.ok) {
            detail.clear();
            for (const auto& f : check.failures) detail += (detail.empty() ? "" : "; ") + f;
        }
        lines.push_back({"certificate", "n=" + to_decimal(cert.n), check.ok, detail});
    }
    emit_checks(cfg, lines, out);
}

void verify_curve(const RunConfig& cfg, Session& s, std::ostream& out) {
    constexpr double kCrtTolerance = 1e-6;
    constexpr double kParsevalRelTolerance = 1e-6;
    const auto f = s.curve();
    const auto data = s.prime_data(f, cfg.x);
    const double c = cfg.weil_constant.value_or(default_weil_constant(f));
    std::vector<CheckLine> lines;

    for (const auto& d : data.local) {
        if (d.degenerate) continue;
        const std::string subject = "p=" + std::to_string(d.p);
        const auto w = weil_check(d, c);
        lines.push_back({"weil", subject, w.passes, format_real(w.slack)});
        const auto pv = parseval_check(d);
        lines.push_back({"parseval", subject, pv.residual <= kParsevalRelTolerance * static_cast<double>(pv.rhs),
                         format_real(pv.residual)});
    }

    const std::string msubject = "M=" + to_decimal(data.modulus.m_value);
    if (data.modulus.m_value > kEnumerationBudget) {
        lines.push_back({"product_formula", msubject, true, "skipped: M exceeds budget"});
        lines.push_back({"crt_identity", msubject, true, "skipped: M exceeds budget"});
        lines.push_back({"congruence_count", msubject, true, "skipped: M exceeds budget"});
    } else {
        const auto pf = product_formula_check(f, data);
        lines.push_back({"product_formula", msubject, pf.equal, to_decimal(pf.lhs) + "=" + to_decimal(pf.rhs)});
        const auto m = data.modulus.m_value.convert_to<std::uint64_t>();
        const auto freqs = standard_frequencies(m);
        const auto residuals = crt_identity_residuals(f, data, freqs);
        for (std::size_t i = 0; i < freqs.size(); ++i)
            lines.push_back({"crt_identity", msubject + " a=" + std::to_string(freqs[i]), residuals[i] <= kCrtTolerance,
                             format_real(residuals[i])});
        const auto cc = congruence_count(f, m, data);
        lines.push_back({"congruence_count", msubject, BigInt(cc.t) == pf.lhs && cc.deviation == 0.0,
                         std::to_string(cc.t)});
    }
    emit_checks(cfg, lines, out);
}

// ---------------------------------------------------------------- scaling

void cmd_scaling(const RunConfig& cfg, Session& s, std::ostream& out) {
    const auto f = s.curve();
    std::vector<std::uint64_t> xs = cfg.xs;
    if (xs.empty() && cfg.x != 0) xs.push_back(cfg.x);
    if (xs.empty()) throw UsageError("scaling needs --xs or --x");
    std::vector<ScalingRow> rows;
    for (auto x : xs) {
        if (x < 2) throw UsageError("every x must be at least 2");
        const auto data = s.prime_data(f, x);
        SearchConfig c;
        c.curve = f;
        c.x = x;
        c.jobs = cfg.jobs;
        const auto result = find_pseudopoints(c, data.local);
        if (!result.found())
            throw DomainError("no " + std::to_string(x) + "-pseudopoint below " + to_decimal(result.ceiling));
        rows.push_back({x, data.modulus.pi_pf, data.modulus.m_value, result.certificates.front().n,
                        log_ratio(result.certificates.front().n, data.modulus.m_value)});
    }
    if (cfg.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows)
            arr.push_back({{"x", r.x},
                           {"pi_pf", r.pi_pf},
                           {"m_value", to_decimal(r.m_value)},
                           {"n", to_decimal(r.n)},
                           {"ratio", format_real(r.ratio)}});
        out << arr.dump(2) << "\n";
        return;
    }
    out << "x,pi_pf,m_value,n,ratio\n";
    for (const auto& r : rows)
        out << r.x << ',' << r.pi_pf << ',' << to_decimal(r.m_value) << ',' << to_decimal(r.n) << ','
            << format_real(r.ratio) << "\n";
}

// ---------------------------------------------------------------- dispatch

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--out", cfg.out_path, "Write results to this file instead of stdout");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--cache", cfg.cache_path, "Per-prime cache file (JSON lines)");
    sub->add_option("--jobs", cfg.jobs, "Worker threads (0 = one per core)");
}

void add_curve(CLI::App* sub, RunConfig& cfg, bool required = true) {
    auto* opt = sub->add_option("--curve", cfg.curve_text, "Polynomial f(U,V), e.g. \"V^2 - U^3 - 1\"");
    if (required) opt->required();
}

void add_search(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--ceiling", cfg.ceiling, "Exclusive upper end of the scan (decimal)");
    sub->add_option("--count", cfg.count, "Number of pseudopoints to report")->check(CLI::PositiveNumber);
}

std::string default_format(const std::string& subcommand) {
    if (subcommand == "search" || subcommand == "pseudosquare" || subcommand == "pseudopower") return "json";
    return "csv";
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Local solvability, exponential sums and pseudopoints of plane curves f(U,V) = 0", "pseudopoints"};
    app.require_subcommand(1);

    auto* local = app.add_subcommand("local", "Point counts and admissible residues for every prime p <= x");
    add_curve(local, cfg);
    local->add_option("--x", cfg.x, "Sieve limit")->required();

    auto* mfx = app.add_subcommand("mfx", "The primes P_f(x) and their product M_f(x)");
    add_curve(mfx, cfg);
    mfx->add_option("--x", cfg.x, "Sieve limit")->required();

    auto* expsum = app.add_subcommand("expsum", "Exponential sums along the curve");
    add_curve(expsum, cfg);
    expsum->add_option("--x", cfg.x, "Sieve limit")->required();
    expsum->add_option("--a", cfg.frequency, "Single frequency (default: all a mod p)");
    expsum->add_flag("--global", cfg.global, "Also emit sums modulo M_f(x)");

    auto* search = app.add_subcommand("search", "Find the smallest x-pseudopoints");
    add_curve(search, cfg, false);
    search->add_option("--x", cfg.x, "Sieve limit")->required();
    add_search(search, cfg);
    search->add_flag("--lehmer", cfg.lehmer, "Classical pseudosquares (n = 1 mod 8, (n/p) = 1)");
    search->add_option("--base", cfg.base, "Pseudopowers to this base");

    auto* psq = app.add_subcommand("pseudosquare", "Smallest Lehmer x-pseudosquares");
    psq->add_option("--x", cfg.x, "Sieve limit")->required();
    add_search(psq, cfg);

    auto* ppow = app.add_subcommand("pseudopower", "Smallest x-pseudopowers to a base");
    ppow->add_option("--base", cfg.base, "Base g, |g| >= 2")->required();
    ppow->add_option("--x", cfg.x, "Sieve limit")->required();
    add_search(ppow, cfg);

    auto* verify = app.add_subcommand("verify", "Run the identity checks for a curve, or re-check certificates");
    add_curve(verify, cfg, false);
    verify->add_option("--x", cfg.x, "Sieve limit");
    verify->add_option("--weil-constant", cfg.weil_constant, "Constant c in |#Z_f(p) - p| <= c sqrt(p)");
    verify->add_option("--cert", cfg.cert_path, "Certificate file written by search");
    verify->add_flag("--recheck-primes", cfg.recheck_primes, "Recompute P_f(x) when checking certificates");

    auto* scaling = app.add_subcommand("scaling", "N_f(x) against M_f(x) for several x");
    add_curve(scaling, cfg);
    scaling->add_option("--xs", cfg.xs, "Comma-separated sieve limits")->delimiter(',');
    scaling->add_option("--x", cfg.x, "Single sieve limit");

    for (auto* sub : {local, mfx, expsum, search, psq, ppow, verify, scaling}) add_common(sub, cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.format.empty()) cfg.format = default_format(cfg.subcommand);

    std::ostringstream buffer;
    int code = kExitOk;
    std::optional<Session> live;
    try {
        Session& session = live.emplace(cfg, err);
        if (cfg.subcommand == "local") {
            cmd_local(cfg, session, buffer);
        } else if (cfg.subcommand == "mfx") {
            cmd_mfx(cfg, session, buffer);
        } else if (cfg.subcommand == "expsum") {
            cmd_expsum(cfg, session, buffer);
        } else if (cfg.subcommand == "search") {
            cmd_search(cfg, session, buffer, err);
        } else if (cfg.subcommand == "pseudosquare") {
            cmd_pseudosquare(cfg, buffer, err);
        } else if (cfg.subcommand == "pseudopower") {
            cmd_pseudopower(cfg, buffer, err);
        } else if (cfg.subcommand == "verify") {
            if (!cfg.cert_path.empty())
                verify_certificates(cfg, buffer);
            else if (cfg.x == 0)
                throw UsageError("verify needs --cert, or --curve with --x");
            else
                verify_curve(cfg, session, buffer);
        } else if (cfg.subcommand == "scaling") {
            cmd_scaling(cfg, session, buffer);
        }
        session.finish();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CheckFailed&) {
        code = kExitDomain;
        live->finish();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }

    if (cfg.out_path.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(cfg.out_path, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot write " << cfg.out_path << "\n";
            return kExitDomain;
        }
        file << buffer.str();
    }
    return code;
}

} // namespace pseudopoints::cli
