#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace spinekit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitSimulation = 3,
};

struct CommandOptions {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;  // csv | json
  bool unsound_wrong_rate = false;
  bool unsound_per_edge_m = false;
  bool timing = false;  // adds wall-clock times to the reports (not reproducible)
};

/// Environment variable that overrides output.dir (but not --out).
inline constexpr const char* kOutDirVariable = "SPINEKIT_OUT_DIR";

/// Runs one subcommand: estimate, direct, verify-discrete, verify-ct, bounds, martingale-check.
int run_command(const std::string& command, const CommandOptions& options, std::ostream& log);

/// Parses argv and dispatches.
int run_cli(int argc, char** argv);

}  // namespace spinekit::cli
