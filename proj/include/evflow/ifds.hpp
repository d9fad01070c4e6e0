#pragma once

// IFDS: distributive flow functions as representation relations, the
// exploded supergraph, the tabulation solver and a brute-force
// meet-over-valid-paths oracle.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evflow/supergraph.hpp"

namespace evflow {

/// Fact 0 is the tautological fact; client facts are 1..num_facts.
using FactId = std::uint32_t;
inline constexpr FactId kZeroFact = 0;

/// A set of client facts (never contains the zero fact).
using FactSet = std::set<FactId>;

/// Canonical bipartite encoding of a distributive function over subsets of
/// {1..n}: <0,0> is always present, <0,d> means d is generated
/// unconditionally, and <a,b> with a != 0 is dropped whenever <0,b> exists.
class RepRelation {
 public:
  using Pair = std::pair<FactId, FactId>;

  RepRelation() : pairs_{{kZeroFact, kZeroFact}} {}

  static RepRelation identity(std::size_t num_facts);
  static RepRelation from_pairs(std::vector<Pair> pairs);
  /// Tabulates f on the empty set and on each singleton.
  static RepRelation from_function(
      const std::function<FactSet(const FactSet&)>& f, std::size_t num_facts);

  const std::vector<Pair>& pairs() const { return pairs_; }
  bool contains(FactId a, FactId b) const;
  /// Targets of `a`, in ascending order.
  std::vector<FactId> targets(FactId a) const;

  friend bool operator==(const RepRelation&, const RepRelation&) = default;

 private:
  void canonicalize();
  std::vector<Pair> pairs_;  // sorted, unique, canonical
};

FactSet apply_rel(const RepRelation& r, const FactSet& s);
/// Relational join: first r1, then r2.
RepRelation compose_rel(const RepRelation& r1, const RepRelation& r2);
RepRelation meet_rel(const RepRelation& r1, const RepRelation& r2);
std::string to_string(const RepRelation& r,
                      const std::function<std::string(FactId)>& name = nullptr);

/// A client dataflow problem: a fact domain plus one flow function per
/// supergraph edge.
class IfdsProblem {
 public:
  virtual ~IfdsProblem() = default;
  virtual std::size_t num_facts() const = 0;
  virtual std::string fact_name(FactId d) const = 0;
  virtual RepRelation flow(const Supergraph& g, EdgeId e) const = 0;
};

/// Supergraph nodes crossed with D u {0}; edges are the lifted relations.
class ExplodedSupergraph {
 public:
  ExplodedSupergraph(std::shared_ptr<const Supergraph> g,
                     std::vector<RepRelation> relations, std::size_t num_facts,
                     std::vector<std::string> fact_names);

  const Supergraph& graph() const { return *graph_; }
  std::shared_ptr<const Supergraph> graph_ptr() const { return graph_; }
  std::size_t num_facts() const { return num_facts_; }
  const std::string& fact_name(FactId d) const { return fact_names_[d]; }
  const RepRelation& relation(EdgeId e) const { return relations_[e]; }
  const std::vector<FactId>& targets(EdgeId e, FactId d) const;
  std::size_t exploded_edge_count() const;

 private:
  std::shared_ptr<const Supergraph> graph_;
  std::vector<RepRelation> relations_;
  std::size_t num_facts_;
  std::vector<std::string> fact_names_;  // [0] = "0"
  std::vector<std::map<FactId, std::vector<FactId>>> succ_;
};

std::shared_ptr<const ExplodedSupergraph> explode(
    std::shared_ptr<const Supergraph> g, const IfdsProblem& problem);

struct IfdsResult {
  std::vector<FactSet> facts;  // per node
  std::vector<bool> reachable;  // <n,0> reached
  std::size_t steps = 0;
  std::size_t path_edges = 0;
  std::size_t summary_edges = 0;

  bool has(NodeId n, FactId d) const { return facts[n].count(d) != 0; }
};

/// Tabulation over context-keyed path edges (start, d1) -> (n, d2), where
/// the start is a StartOf node or the event loop. Deterministic FIFO.
class IfdsSolver {
 public:
  explicit IfdsSolver(const ExplodedSupergraph& g);

  void solve(NodeId entry);
  /// Re-enqueues every known path edge and runs to quiescence; returns the
  /// number of path edges that were new.
  std::size_t reprocess_all();
  IfdsResult result() const;

 private:
  struct Key {
    NodeId n;
    FactId d;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  struct PathEdge {
    NodeId s;
    FactId d1;
    NodeId n;
    FactId d2;
    friend auto operator<=>(const PathEdge&, const PathEdge&) = default;
  };

  void propagate(const PathEdge& pe);
  void run();
  void process(const PathEdge& pe);
  void add_summary(NodeId c, FactId dc, NodeId r, FactId dr);
  void apply_end_summary(NodeId c, FactId dc, NodeId exit, FactId de);

  const ExplodedSupergraph& g_;
  std::set<PathEdge> path_edges_;
  std::vector<PathEdge> worklist_;
  std::size_t head_ = 0;
  std::map<Key, std::set<Key>> at_;        // (n,d2) -> contexts (s,d1)
  std::map<Key, std::set<Key>> incoming_;  // callee (s,d3) -> callers (c,d2)
  std::map<Key, std::set<Key>> end_sum_;   // (s,d1) -> exits (e,d2)
  std::map<Key, std::set<Key>> summary_;   // (c,d2) -> (r,d5)
  std::size_t steps_ = 0;
  std::size_t summary_count_ = 0;
};

IfdsResult solve_ifds(const ExplodedSupergraph& g, NodeId entry);

/// Reachability in the exploded graph ignoring call/return matching.
std::vector<FactSet> unbalanced_reach(const ExplodedSupergraph& g, NodeId entry);

class PathBudgetExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BruteForceResult {
  std::vector<FactSet> facts;
  /// Nodes reached by at least one valid path of length <= max_len.
  std::vector<bool> covered;
  std::size_t paths = 0;
};

/// Enumerates valid paths (balanced call/return, unmatched returns
/// forbidden) of at most `max_len` edges from `entry`, composing the
/// relations along each and taking the union at every node.
BruteForceResult mvp_bruteforce(const Supergraph& g,
                                const std::function<const RepRelation&(EdgeId)>& flow,
                                NodeId entry, std::size_t max_len,
                                std::size_t path_budget = 100000);

/// Graphviz rendering of the exploded graph: one row per supergraph node,
/// one column per fact.
void write_exploded_dot(std::ostream& os, const ExplodedSupergraph& g,
                        const IfdsResult* highlight = nullptr);

}  // namespace evflow
