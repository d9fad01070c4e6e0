#pragma once

// Ties parsing, analysis and reporting together for the command line.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evflow/report.hpp"

namespace evflow {

enum class Format { Text, Json };

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path event_model;  // empty: built-in primitives only
  Mode mode = Mode::Diff;
  Format format = Format::Text;
  std::filesystem::path dump_supergraph;
  std::filesystem::path dump_exploded;
  // oracle subcommand
  std::filesystem::path corpus_dir;
  std::uint64_t seed = 1;
  std::size_t schedules = 6;
  std::size_t random_programs = 100;
};

inline constexpr int kExitClean = 0;
inline constexpr int kExitDiagnostics = 1;
inline constexpr int kExitError = 2;

struct RunResult {
  int exit_code = kExitClean;
  std::optional<Report> report;  // absent on errors
};

/// Analyzes cfg.inputs as one program. Output goes to `out`, error messages
/// (naming file and line, or config key) to `err`.
RunResult run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// 0 when every property holds, 1 on a violation, 2 on setup errors.
int run_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// True unless EVFLOW_NO_COLOR is set (to anything).
bool color_enabled();

}  // namespace evflow
