#pragma once

// IDE over the handler-state value lattice H -> L. Phase 1 tabulates jump
// functions (HandlerMicroFn per path edge, met on insert); phase 2 pushes
// the entry environment through them, first to procedure entries and then
// to every node.

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <tuple>
#include <string>
#include <vector>

#include "evflow/event_lattice.hpp"
#include "evflow/ifds.hpp"

namespace evflow {

/// Exploded supergraph plus a micro-function on every exploded edge. By
/// default every exploded edge over supergraph edge e carries e's label;
/// individual exploded edges may be overridden.
class LabeledExplodedSupergraph {
 public:
  explicit LabeledExplodedSupergraph(std::shared_ptr<const ExplodedSupergraph> g,
                                     std::size_t handler_count = 0);

  const ExplodedSupergraph& exploded() const { return *g_; }
  std::shared_ptr<const ExplodedSupergraph> exploded_ptr() const { return g_; }
  std::size_t handler_count() const { return handler_count_; }

  void set_edge_label(EdgeId e, HandlerMicroFn f);
  void set_label(EdgeId e, FactId d1, FactId d2, HandlerMicroFn f);
  const HandlerMicroFn& edge_label(EdgeId e) const { return edge_labels_[e]; }
  const HandlerMicroFn& label(EdgeId e, FactId d1, FactId d2) const;

 private:
  std::shared_ptr<const ExplodedSupergraph> g_;
  std::size_t handler_count_;
  std::vector<HandlerMicroFn> edge_labels_;
  std::map<std::tuple<EdgeId, FactId, FactId>, HandlerMicroFn> overrides_;
};

/// Fact -> handler-state map. A fact that is absent is unreachable (top).
using Environment = std::map<FactId, HStateMap>;

struct IdeStats {
  std::size_t steps = 0;
  std::size_t compositions = 0;
  std::size_t meets = 0;
  std::size_t jump_entries = 0;
  /// Largest handler count visited by any single compose/meet/apply.
  std::size_t max_op_work = 0;
  /// Most times a single jump-function entry was written (first insert
  /// included).
  std::size_t max_entry_updates = 0;
};

struct IdeResult {
  std::vector<Environment> values;  // per node
  IdeStats stats;

  bool has(NodeId n, FactId d) const { return values[n].count(d) != 0; }
  const HStateMap& at(NodeId n, FactId d) const { return values[n].at(d); }
};

class IdeSolver {
 public:
  explicit IdeSolver(const LabeledExplodedSupergraph& g);

  /// Seeds phase 1 with <entry,d> for every fact d of `init` and solves both
  /// phases.
  void solve(NodeId entry, const Environment& init);
  /// Re-enqueues every jump function; returns how many entries changed.
  std::size_t reprocess_all();
  IdeResult result() const;
  /// Stable text rendering of the phase-1 table, one entry per line.
  std::string dump_jump_functions(const std::vector<std::string>& handler_names) const;

 private:
  struct Key {
    NodeId n;
    FactId d;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  struct JumpKey {
    NodeId s;
    FactId d1;
    NodeId n;
    FactId d2;
    friend auto operator<=>(const JumpKey&, const JumpKey&) = default;
  };

  HandlerMicroFn compose(const HandlerMicroFn& g, const HandlerMicroFn& f);
  HandlerMicroFn meet(const HandlerMicroFn& f, const HandlerMicroFn& g);
  HStateMap apply(const HandlerMicroFn& f, const HStateMap& m);
  HStateMap meet(const HStateMap& a, const HStateMap& b);

  void propagate(const JumpKey& k, const HandlerMicroFn& f);
  void run_phase1();
  void process(const JumpKey& k);
  void add_summary(NodeId c, FactId dc, NodeId r, FactId dr,
                   const HandlerMicroFn& f);
  void apply_end_summary(NodeId c, FactId dc, NodeId start, FactId ds,
                         NodeId exit, FactId de);
  void phase2();

  const LabeledExplodedSupergraph& g_;
  std::map<JumpKey, HandlerMicroFn> jump_;
  std::map<JumpKey, std::size_t> updates_;
  std::vector<JumpKey> worklist_;
  std::size_t head_ = 0;
  std::set<JumpKey> queued_;
  std::map<Key, std::set<Key>> at_;        // (n,d2) -> contexts (s,d1)
  std::map<Key, std::set<Key>> from_ctx_;  // (s,d1) -> (n,d2)
  std::map<Key, std::set<Key>> incoming_;  // callee (s,d3) -> callers (c,d2)
  std::map<Key, std::set<Key>> end_sum_;   // (s,d1) -> exits (e,d2)
  std::map<std::pair<Key, Key>, HandlerMicroFn> summary_;  // ((c,d2),(r,d5))
  std::map<Key, std::set<Key>> summary_at_;               // (c,d2) -> (r,d5)
  std::map<Key, HStateMap> val_;
  std::vector<Environment> values_;
  IdeStats stats_;
};

IdeResult solve_ide(const LabeledExplodedSupergraph& g, NodeId entry,
                    const Environment& init);

}  // namespace evflow
