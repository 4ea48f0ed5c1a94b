#pragma once

#include <optional>
#include <string>

// CLI subcommand dispatch. Each command parses its strict-JSON config, runs
// the pipeline, and stages CSV/SVG artifacts plus meta.txt; nothing touches
// the filesystem until the run has succeeded.

namespace tbq::commands {

struct RunContext {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
  bool plot = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

/// Known commands: fringe, chsh, tomo, qkd_passive, qkd_active, sweep_loss,
/// bounds_compare, timetags. Returns a process exit code.
int dispatch(const std::string& command, const RunContext& ctx);

}  // namespace tbq::commands
