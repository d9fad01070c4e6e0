#pragma once

// Concrete, single-threaded, non-preemptive execution of EVL programs.
//
// Top-level code runs to completion first. `emit` calls the event's current
// listeners synchronously, in registration order. Asynchronous registrations
// (register_async and implicit-emit wrappers) put the handler on a ready
// queue, which is drained after top-level finishes; when more than one
// handler is ready the SchedulePolicy picks which one runs next.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "evflow/lang.hpp"

namespace evflow {

struct TraceEvent {
  enum class Kind {
    StmtExec,
    HandlerInvoked,
    HandlerRegistered,
    EventEmitted,
    UninitRead,
    Output,
    Truncated,
    RuntimeError
  };

  Kind kind = Kind::StmtExec;
  lang::StmtId stmt = 0;
  lang::FuncId handler = lang::kNoFunc;
  lang::VarId var = lang::kNoVar;
  std::string event;  // empty for async registrations and invocations
  std::string text;   // Output payload or error/truncation reason
  bool async = false;  // registration queues the handler / invocation came from the queue
};

struct ExecutionTrace {
  std::vector<TraceEvent> events;
  bool truncated = false;
  bool runtime_error = false;
  /// Number of ready handlers at each scheduling decision (only points with
  /// at least two candidates count as decisions).
  std::vector<std::size_t> decision_options;
  std::vector<std::size_t> decisions_taken;

  std::vector<std::string> outputs() const;
  std::vector<const TraceEvent*> uninit_reads() const;
  std::vector<lang::FuncId> invocations() const;
};

/// Explicit choices for successive scheduling decisions. Choice i indexes the
/// ready queue in FIFO order; decisions past the end of the list take 0.
struct SchedulePolicy {
  std::vector<std::size_t> choices;

  static SchedulePolicy fifo() { return {}; }
};

struct InterpretOptions {
  std::size_t step_limit = 100000;
  std::size_t max_call_depth = 256;
};

class RuntimeTypeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExecutionTrace interpret(const lang::Program& p,
                         const SchedulePolicy& schedule = SchedulePolicy::fifo(),
                         const InterpretOptions& opts = {});

/// Every trace reachable by varying the first `max_decisions` scheduling
/// decisions (later ones use FIFO). Stops after `max_traces` traces.
std::vector<ExecutionTrace> explore_schedules(const lang::Program& p,
                                              std::size_t max_decisions,
                                              const InterpretOptions& opts = {},
                                              std::size_t max_traces = 20000);

/// Structural check: every invocation of h follows a registration of h and
/// an emission of its event after that registration (or an async
/// registration). On failure `why` describes the offending event.
bool check_handler_ordering(const lang::Program& p, const ExecutionTrace& t,
                            std::string* why = nullptr);

}  // namespace evflow
