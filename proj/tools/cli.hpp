#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pseudopoints::cli {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default cache directory.
inline constexpr const char* kCacheDirEnv = "PSEUDOPOINTS_CACHE_DIR";

/// Runs one subcommand. `args` excludes the program name. Results go to `out`
/// (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pseudopoints::cli
