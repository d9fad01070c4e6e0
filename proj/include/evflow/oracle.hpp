#pragma once

// Property checks relating the analyses to each other and to concrete runs:
// precision (the filtered result never exceeds plain IFDS) and soundness
// (every uninitialized read the interpreter observes is still reported).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "evflow/event_model.hpp"
#include "evflow/program_gen.hpp"
#include "evflow/transform.hpp"

namespace evflow {

/// Descriptions of nodes where a filtered fact is missing from IFDS.
std::vector<std::string> check_precision(const EventAwareAnalysis& a);

struct SoundnessStats {
  std::size_t traces = 0;
  std::size_t uninit_reads = 0;
};

/// Runs FIFO plus every schedule varying the first `max_decisions` dispatch
/// decisions and returns one description per uninitialized read that the
/// filtered result misses.
std::vector<std::string> check_soundness(const EventAwareAnalysis& a,
                                         std::size_t max_decisions,
                                         SoundnessStats* stats = nullptr);

struct CorpusEntry {
  std::filesystem::path source;
  std::filesystem::path model;  // empty when the program uses only built-ins
};

/// *.evl files in name order; `x.model.json` next to `x.evl` is its model.
std::vector<CorpusEntry> list_corpus(const std::filesystem::path& dir);

struct OracleConfig {
  std::filesystem::path corpus_dir;
  std::size_t random_programs = 100;
  std::uint64_t seed = 1;
  std::size_t schedules = 6;
  GenParams params;
};

struct OracleViolation {
  std::string program_name;
  std::string program_text;
  std::string property;  // "precision" or "soundness"
  std::string detail;
};

struct OracleSummary {
  std::size_t programs = 0;
  std::size_t traces = 0;
  std::size_t uninit_reads = 0;
  std::vector<OracleViolation> violations;

  bool passed() const { return violations.empty(); }
};

/// Checks every corpus program and `random_programs` generated ones. Progress
/// and counterexamples go to `log` when it is non-null.
OracleSummary run_oracle_suite(const OracleConfig& cfg, std::ostream* log = nullptr);

}  // namespace evflow
