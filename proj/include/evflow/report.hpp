#pragma once

// Diagnostics reports in text and JSON form.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evflow/transform.hpp"

namespace evflow {

enum class Mode { Ifds, Ide, Diff };

std::string to_string(Mode m);
std::optional<Mode> parse_mode(const std::string& s);

inline constexpr int kReportVersion = 1;

struct ReportDiagnostic {
  std::string file;
  std::uint32_t line = 0;
  std::string var;
  bool filtered = false;
  /// Handler states that excluded the fact (filtered diagnostics only), in
  /// handler order.
  std::optional<std::vector<std::pair<std::string, std::string>>> handler_states;
  std::string note;

  friend bool operator==(const ReportDiagnostic&, const ReportDiagnostic&) = default;
};

struct ReportStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t facts = 0;
  std::size_t handlers = 0;
  std::size_t exploded_edges = 0;
  std::size_t ifds_steps = 0;
  std::size_t ifds_path_edges = 0;
  std::size_t ide_steps = 0;
  std::size_t ide_jump_entries = 0;
  double wall_ms = 0;

  friend bool operator==(const ReportStats&, const ReportStats&) = default;
};

struct Report {
  int version = kReportVersion;
  std::vector<std::string> files;
  Mode mode = Mode::Diff;
  std::vector<ReportDiagnostic> diagnostics;
  std::vector<std::string> warnings;
  ReportStats stats;

  /// Diagnostics that count toward a nonzero exit status.
  std::size_t reported_count() const;

  friend bool operator==(const Report&, const Report&) = default;
};

/// In ifds mode every IFDS diagnostic is reported; in ide mode only those
/// surviving the event-aware filter. Diff mode lists all IFDS diagnostics and
/// marks the ones the filter removed.
Report build_report(const EventAwareAnalysis& a, Mode mode);

nlohmann::ordered_json to_json(const Report& r);
/// Inverse of to_json. Throws nlohmann::json::exception on malformed input.
Report report_from_json(const nlohmann::ordered_json& j);

/// Human-readable form. ANSI colors only when `color` is set.
std::string render_text(const Report& r, bool color);

}  // namespace evflow
