#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "hps/app/config.hpp"

namespace hps::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

struct CommandOptions {
  std::filesystem::path out_dir;
  int threads = 1;
  unsigned seed = 0;  // reserved; every algorithm is deterministic
};

const std::vector<std::string>& command_names();

/// Runs one subcommand, writing CSVs (and run.log with wall times) under options.out_dir.
/// Human-readable progress goes to `out`, diagnostics to `err`. Returns the exit code.
int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& options,
                std::ostream& out, std::ostream& err);

int cmd_solve(const RunConfig& cfg, const CommandOptions& options, std::ostream& out);
int cmd_converge(const RunConfig& cfg, const CommandOptions& options, std::ostream& out);
int cmd_scaling(const RunConfig& cfg, const CommandOptions& options, std::ostream& out);
int cmd_rankprobe(const RunConfig& cfg, const CommandOptions& options, std::ostream& out);
int cmd_verify(const RunConfig& cfg, const CommandOptions& options, std::ostream& out);

}  // namespace hps::app
