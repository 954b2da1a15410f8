#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace dersizer {

enum class Command { lcoe, qfd, reliability_curve, plan, sweep };

std::optional<Command> parse_command(const std::string& verb);
std::string command_name(Command command);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitInfeasible = 4;

struct RunManifest {
  std::string config_path;
  Command command = Command::plan;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  int verbosity = 0;
};

/// Runs one command and writes its artifacts into `output_dir` (created if
/// missing). Diagnostics go to `log`. Returns one of the kExit* codes.
int run(const RunManifest& manifest, std::ostream& log);

}  // namespace dersizer
