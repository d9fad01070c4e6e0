#pragma once

// Interprocedural control-flow supergraph with a single event-loop node.
//
// Each statement's effect sits on its outgoing edges. Calls and emits are
// split into a call-site node and a return-site node joined by a
// call-to-return edge. Emission is modeled as a call into the event loop,
// and the loop dispatches to every handler through call-like edges, so the
// valid-path discipline treats both uniformly.

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "evflow/event_lattice.hpp"
#include "evflow/event_model.hpp"
#include "evflow/lang.hpp"

namespace evflow {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

enum class NodeKind { StartOf, EndOf, Stmt, CallSite, ReturnSite, EventLoop };
enum class EdgeKind {
  Intraproc,
  Call,
  Return,
  CallToReturn,
  ToEventLoop,
  Dispatch
};

const char* to_string(NodeKind k);
const char* to_string(EdgeKind k);

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::Stmt;
  lang::FuncId func = lang::kNoFunc;  // owning function; kNoFunc for the event loop
  const lang::Stmt* stmt = nullptr;   // Stmt, CallSite, ReturnSite
};

struct Edge {
  EdgeId id = 0;
  NodeId from = 0;
  NodeId to = 0;
  EdgeKind kind = EdgeKind::Intraproc;
  /// Call, Dispatch and Return edges: the node that made the call (the
  /// event loop for dispatches). kNoNode otherwise.
  NodeId call_site = kNoNode;
  lang::FuncId target = lang::kNoFunc;  // callee / dispatched handler
};

/// Event-handler operation attached to an edge.
struct EventOp {
  enum class Kind {
    Register,
    Emit,
    EmitRegister,  // registration with implicit emission
    Invoke,
    CalleeEffect   // a bypassed call may register and emit this handler
  };
  Kind kind = Kind::Register;
  HandlerId handler = 0;

  friend bool operator==(const EventOp&, const EventOp&) = default;
};

const char* to_string(EventOp::Kind k);

/// Operations applied in order along one edge; empty means no event effect.
using EdgeAnnotation = std::vector<EventOp>;

class Supergraph {
 public:
  const lang::Program& program() const { return *program_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Node& node(NodeId n) const { return nodes_[n]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<EdgeId>& out_edges(NodeId n) const { return out_[n]; }
  const std::vector<EdgeId>& in_edges(NodeId n) const { return in_[n]; }

  NodeId start_of(lang::FuncId f) const { return start_[f]; }
  NodeId end_of(lang::FuncId f) const { return end_[f]; }
  NodeId event_loop() const { return event_loop_; }
  NodeId entry() const { return start_[lang::kTopLevel]; }
  /// Node at which a statement reads its operands (call site for calls and
  /// emits).
  NodeId stmt_node(lang::StmtId s) const { return stmt_node_.at(s); }
  /// Return site paired with a call site.
  NodeId return_site(NodeId call) const;

  /// Is `n` where the procedure entered at `start` exits? The event loop is
  /// both the entry and the exit of the loop pseudo-procedure.
  bool is_exit(NodeId start, NodeId n) const;
  bool is_start(NodeId n) const;

  std::uint32_t line_of(NodeId n) const;
  std::string label(NodeId n) const;

 private:
  friend struct SupergraphBuilder;
  std::shared_ptr<const lang::Program> program_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::vector<NodeId> start_;
  std::vector<NodeId> end_;
  std::vector<NodeId> stmt_node_;
  std::map<NodeId, NodeId> return_site_;
  NodeId event_loop_ = kNoNode;
};

struct SupergraphBuild {
  std::shared_ptr<const Supergraph> graph;
  std::vector<EdgeAnnotation> annotations;  // indexed by EdgeId
  std::vector<lang::FuncId> handlers;       // H, indexed by HandlerId
  std::vector<std::string> handler_names;
  std::map<std::string, std::set<std::string>> registry;
  std::vector<std::string> warnings;

  HandlerId handler_id(lang::FuncId f) const;  // throws if f is not in H
};

class UnknownHandler : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Builds the supergraph and its event annotations. `program` is shared so
/// the graph can keep statement pointers alive.
SupergraphBuild build_supergraph(std::shared_ptr<const lang::Program> program,
                                 const EventModel& model = EventModel::builtin());

/// Event name -> handlers registered for it anywhere in the program.
std::map<std::string, std::set<std::string>> handler_registry(
    const lang::Program& p);

struct DotOptions {
  std::vector<NodeId> highlight_path;  // drawn bold
  const std::vector<EdgeAnnotation>* annotations = nullptr;
  const std::vector<std::string>* handler_names = nullptr;
};

/// Graphviz rendering: one cluster per function, interprocedural edges
/// dashed.
void write_dot(std::ostream& os, const Supergraph& g, const DotOptions& opts = {});

}  // namespace evflow
