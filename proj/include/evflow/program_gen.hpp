#pragma once

// Seeded random EVL programs for property tests and the oracle suite.

#include <cstdint>
#include <string>

namespace evflow {

struct GenParams {
  int max_handlers = 3;
  int max_events = 2;
  int max_stmts = 20;  // across all bodies, nested statements included
  int max_globals = 3;
  int max_block_depth = 2;
  bool loops = true;
  bool helper = true;  // an auxiliary synchronous function taking one argument

  /// Smaller programs whose valid paths stay short enough to enumerate.
  static GenParams small() {
    GenParams p;
    p.max_handlers = 2;
    p.max_events = 2;
    p.max_stmts = 9;
    p.max_globals = 2;
    p.max_block_depth = 1;
    p.loops = false;
    return p;
  }
};

/// Deterministic in (seed, params).
std::string generate_program(std::uint64_t seed, const GenParams& params = {});

}  // namespace evflow
