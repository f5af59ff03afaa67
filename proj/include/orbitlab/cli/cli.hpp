#ifndef ORBITLAB_CLI_CLI_HPP
#define ORBITLAB_CLI_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace orbitlab::cli {

inline constexpr const char* kToolVersion = "0.3.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitCapExceeded = 3,
  kExitPropertyViolation = 4,
};

// FNV-1a 64 of the raw config bytes.
std::uint64_t config_hash(const std::string& text);

// `args` excludes the program name:
//   <command> --config <path> [--out <path>] [--seed <u64>]
// Tables and reports go to --out (or `out`); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orbitlab::cli

#endif
