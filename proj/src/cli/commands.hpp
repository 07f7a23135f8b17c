#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace zeno::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct CommandOptions {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> trajectories;
  int threads = 0;
  std::optional<std::string> input;  ///< psd: T1 series CSV
};

/// Runs one subcommand and maps failures onto exit codes; diagnostics go
/// to `err`, written file paths to `out`.
int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out, std::ostream& err);

std::string tool_version();

}  // namespace zeno::cli
