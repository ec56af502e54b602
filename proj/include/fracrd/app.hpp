#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "fracrd/config.hpp"
#include "fracrd/io.hpp"
#include "fracrd/studies.hpp"

namespace fracrd {

/// Runs the requested checks. Field and trajectory checks need `result`;
/// they are skipped (not reported) when it is null.
std::vector<CheckReport> run_checks(const std::vector<CheckSpec>& checks, const RunSpec& spec,
                                    const SimConfig& sim, const RunResult* result, std::uint64_t seed);

struct CommandOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

/// Each returns the process exit code: 0 iff every verdict passed.
int command_run(const std::filesystem::path& config, const CommandOptions& options, std::ostream& out);
int command_check(const std::filesystem::path& config, const CommandOptions& options, std::ostream& out);
int command_reproduce(TableId table, Budget budget, const CommandOptions& options, std::ostream& out);
int command_convergence(const CommandOptions& options, std::ostream& out);

}  // namespace fracrd
