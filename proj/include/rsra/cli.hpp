#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsra/config.hpp"
#include "rsra/experiments.hpp"

namespace rsra::cli {

enum class Command { Simulate, SweepDp, SweepLoad, PerSlot, ValidateConfig };

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Bad command line or configuration; maps to exit code 2.
class UsageFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was given; what() holds the help text. Maps to exit code 0.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliInvocation {
  Command command = Command::Simulate;
  std::optional<std::filesystem::path> config_path;
  std::vector<std::string> overrides;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  int verbosity = 1;  ///< 0 quiet, 1 normal, 2 verbose
  RunConfig resolved; ///< defaults < file < command presets < overrides < flags
};

std::string_view command_name(Command c);

/// Parses arguments (without the program name) and resolves the
/// configuration. Throws UsageFailure or HelpRequested.
CliInvocation parse_and_validate(const std::vector<std::string>& args);

/// SweepSpec for the invocation's command and resolved configuration.
SweepSpec make_sweep_spec(const CliInvocation& inv);

/// Runs the command, writing outputs under the resolved out_dir and a
/// one-line summary to `out`. Returns the process exit code.
int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err);

/// parse_and_validate + execute with the exit-code contract applied.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsra::cli
