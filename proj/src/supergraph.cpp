#include "evflow/supergraph.hpp"

#include <algorithm>
#include <stdexcept>

namespace evflow {

using lang::FuncId;
using lang::Program;
using lang::Stmt;

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::StartOf: return "start";
    case NodeKind::EndOf: return "end";
    case NodeKind::Stmt: return "stmt";
    case NodeKind::CallSite: return "call";
    case NodeKind::ReturnSite: return "return";
    case NodeKind::EventLoop: return "event-loop";
  }
  return "?";
}

const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Intraproc: return "intraproc";
    case EdgeKind::Call: return "call";
    case EdgeKind::Return: return "return";
    case EdgeKind::CallToReturn: return "call-to-return";
    case EdgeKind::ToEventLoop: return "to-event-loop";
    case EdgeKind::Dispatch: return "dispatch";
  }
  return "?";
}

const char* to_string(EventOp::Kind k) {
  switch (k) {
    case EventOp::Kind::Register: return "register";
    case EventOp::Kind::Emit: return "emit";
    case EventOp::Kind::EmitRegister: return "emit.register";
    case EventOp::Kind::Invoke: return "invoke";
    case EventOp::Kind::CalleeEffect: return "callee-effect";
  }
  return "?";
}

NodeId Supergraph::return_site(NodeId call) const {
  auto it = return_site_.find(call);
  return it == return_site_.end() ? kNoNode : it->second;
}

bool Supergraph::is_start(NodeId n) const {
  return nodes_[n].kind == NodeKind::StartOf || n == event_loop_;
}

bool Supergraph::is_exit(NodeId start, NodeId n) const {
  if (start == event_loop_) return n == event_loop_;
  const Node& s = nodes_[start];
  return s.kind == NodeKind::StartOf && n == end_[s.func];
}

std::uint32_t Supergraph::line_of(NodeId n) const {
  const Node& node = nodes_[n];
  if (node.stmt) return node.stmt->loc.line;
  if (node.func != lang::kNoFunc) return program_->functions[node.func].loc.line;
  return 0;
}

std::string Supergraph::label(NodeId n) const {
  const Node& node = nodes_[n];
  switch (node.kind) {
    case NodeKind::StartOf:
      return "start " + program_->functions[node.func].name;
    case NodeKind::EndOf:
      return "end " + program_->functions[node.func].name;
    case NodeKind::EventLoop:
      return "event loop";
    case NodeKind::ReturnSite:
      return "return from " + node.stmt->name;
    case NodeKind::Stmt:
    case NodeKind::CallSite:
      return lang::stmt_summary(*node.stmt);
  }
  return "?";
}

HandlerId SupergraphBuild::handler_id(FuncId f) const {
  auto it = std::find(handlers.begin(), handlers.end(), f);
  if (it == handlers.end()) throw UnknownHandler("function is not a handler");
  return static_cast<HandlerId>(it - handlers.begin());
}

std::map<std::string, std::set<std::string>> handler_registry(const Program& p) {
  std::map<std::string, std::set<std::string>> out;
  lang::for_each_stmt(p, [&](const Stmt& s, FuncId) {
    if (s.kind == Stmt::Kind::Register) out[s.event].insert(s.handler);
  });
  return out;
}

struct SupergraphBuilder {
  explicit SupergraphBuilder(std::shared_ptr<const Program> p) {
    g = std::make_shared<Supergraph>();
    g->program_ = std::move(p);
  }

  const Program& prog() const { return *g->program_; }

  NodeId add_node(NodeKind kind, FuncId f, const Stmt* s) {
    const auto id = static_cast<NodeId>(g->nodes_.size());
    g->nodes_.push_back({id, kind, f, s});
    g->out_.emplace_back();
    g->in_.emplace_back();
    return id;
  }

  EdgeId add_edge(NodeId from, NodeId to, EdgeKind kind,
                  NodeId call_site = kNoNode, FuncId target = lang::kNoFunc) {
    if (kind == EdgeKind::Intraproc) {
      for (EdgeId e : g->out_[from]) {
        const Edge& ex = g->edges_[e];
        if (ex.to == to && ex.kind == kind) return e;
      }
    }
    const auto id = static_cast<EdgeId>(g->edges_.size());
    g->edges_.push_back({id, from, to, kind, call_site, target});
    g->out_[from].push_back(id);
    g->in_[to].push_back(id);
    return id;
  }

  using Frontier = std::vector<NodeId>;

  void connect(const Frontier& from, NodeId to) {
    for (NodeId n : from) add_edge(n, to, EdgeKind::Intraproc);
  }

  Frontier block(FuncId f, const std::vector<Stmt>& body, Frontier front) {
    for (const Stmt& s : body) front = stmt(f, s, std::move(front));
    return front;
  }

  Frontier stmt(FuncId f, const Stmt& s, Frontier front) {
    switch (s.kind) {
      case Stmt::Kind::If: {
        const NodeId n = add_node(NodeKind::Stmt, f, &s);
        g->stmt_node_[s.id] = n;
        connect(front, n);
        Frontier out = block(f, s.body, {n});
        Frontier other = block(f, s.else_body, {n});
        out.insert(out.end(), other.begin(), other.end());
        return out;
      }
      case Stmt::Kind::While: {
        const NodeId n = add_node(NodeKind::Stmt, f, &s);
        g->stmt_node_[s.id] = n;
        connect(front, n);
        connect(block(f, s.body, {n}), n);
        return {n};
      }
      case Stmt::Kind::Call:
      case Stmt::Kind::Emit: {
        const NodeId c = add_node(NodeKind::CallSite, f, &s);
        const NodeId r = add_node(NodeKind::ReturnSite, f, &s);
        g->stmt_node_[s.id] = c;
        g->return_site_[c] = r;
        connect(front, c);
        if (s.kind == Stmt::Kind::Call) {
          add_edge(c, g->start_[s.callee], EdgeKind::Call, c, s.callee);
          add_edge(g->end_[s.callee], r, EdgeKind::Return, c, s.callee);
        } else {
          add_edge(c, g->event_loop_, EdgeKind::Call, c);
          add_edge(g->event_loop_, r, EdgeKind::Return, c);
        }
        add_edge(c, r, EdgeKind::CallToReturn, c);
        return {r};
      }
      case Stmt::Kind::Return: {
        const NodeId n = add_node(NodeKind::Stmt, f, &s);
        g->stmt_node_[s.id] = n;
        connect(front, n);
        add_edge(n, g->end_[f], EdgeKind::Intraproc);
        return {};
      }
      default: {
        const NodeId n = add_node(NodeKind::Stmt, f, &s);
        g->stmt_node_[s.id] = n;
        connect(front, n);
        return {n};
      }
    }
  }

  // Nodes for every function, their bodies, and the event-loop wiring.
  void layout(const std::vector<FuncId>& handlers) {
    g->stmt_node_.assign(prog().stmt_count, kNoNode);
    g->start_.resize(prog().functions.size());
    g->end_.resize(prog().functions.size());
    for (const auto& f : prog().functions) {
      g->start_[f.id] = add_node(NodeKind::StartOf, f.id, nullptr);
      g->end_[f.id] = add_node(NodeKind::EndOf, f.id, nullptr);
    }
    g->event_loop_ = add_node(NodeKind::EventLoop, lang::kNoFunc, nullptr);

    for (const auto& f : prog().functions) {
      connect(block(f.id, f.body, {g->start_[f.id]}), g->end_[f.id]);
    }
    add_edge(g->end_[lang::kTopLevel], g->event_loop_, EdgeKind::ToEventLoop);
    for (FuncId h : handlers) {
      add_edge(g->event_loop_, g->start_[h], EdgeKind::Dispatch, g->event_loop_, h);
      add_edge(g->end_[h], g->event_loop_, EdgeKind::Return, g->event_loop_, h);
    }
  }

  std::shared_ptr<Supergraph> g;
};

namespace {

// Handlers whose state a call to f may move to E: everything f registers or
// emits, transitively through its callees and synchronously run handlers.
std::vector<std::set<FuncId>> callee_effects(
    const Program& p,
    const std::map<std::string, std::vector<FuncId>>& by_event) {
  const std::size_t n = p.functions.size();
  std::vector<std::set<FuncId>> eff(n);
  std::vector<std::set<FuncId>> deps(n);
  for (const auto& f : p.functions) {
    lang::for_each_stmt(f.body, f.id, [&](const Stmt& s, FuncId) {
      switch (s.kind) {
        case Stmt::Kind::Register:
        case Stmt::Kind::RegisterAsync:
          eff[f.id].insert(s.callee);
          break;
        case Stmt::Kind::Emit: {
          auto it = by_event.find(s.event);
          if (it == by_event.end()) break;
          for (FuncId h : it->second) {
            eff[f.id].insert(h);
            deps[f.id].insert(h);
          }
          break;
        }
        case Stmt::Kind::Call:
          deps[f.id].insert(s.callee);
          break;
        default:
          break;
      }
    });
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t f = 0; f < n; ++f) {
      for (FuncId d : deps[f]) {
        for (FuncId h : eff[d]) changed |= eff[f].insert(h).second;
      }
    }
  }
  return eff;
}

}  // namespace

SupergraphBuild build_supergraph(std::shared_ptr<const Program> program,
                                 const EventModel& model) {
  (void)model;  // primitives were already resolved by the parser
  SupergraphBuilder b(std::move(program));
  Supergraph& g = *b.g;
  const Program& p = b.prog();
  SupergraphBuild out;

  // H: every function named in a handler position, in declaration order.
  std::set<FuncId> handler_set;
  std::map<std::string, std::vector<FuncId>> by_event;
  lang::for_each_stmt(p, [&](const Stmt& s, FuncId) {
    if (s.kind == Stmt::Kind::Register || s.kind == Stmt::Kind::RegisterAsync) {
      if (s.callee == lang::kNoFunc) {
        throw UnknownHandler("unknown handler '" + s.handler + "'");
      }
      handler_set.insert(s.callee);
    }
    if (s.kind == Stmt::Kind::Register) {
      auto& hs = by_event[s.event];
      if (std::find(hs.begin(), hs.end(), s.callee) == hs.end()) {
        hs.push_back(s.callee);
      }
    }
  });
  out.handlers.assign(handler_set.begin(), handler_set.end());
  for (FuncId h : out.handlers) out.handler_names.push_back(p.functions[h].name);
  out.registry = handler_registry(p);
  for (auto& [ev, hs] : by_event) std::sort(hs.begin(), hs.end());
  auto hid = [&](FuncId f) { return out.handler_id(f); };

  b.layout(out.handlers);

  // Annotations.
  const auto effects = callee_effects(p, by_event);
  out.annotations.assign(g.edges().size(), {});
  auto sync_handlers = [&](const std::string& ev) -> std::vector<FuncId> {
    auto it = by_event.find(ev);
    return it == by_event.end() ? std::vector<FuncId>{} : it->second;
  };
  for (const Edge& e : g.edges()) {
    auto& ann = out.annotations[e.id];
    if (e.kind == EdgeKind::Dispatch) {
      ann.push_back({EventOp::Kind::Invoke, hid(e.target)});
      continue;
    }
    const Node& src = g.node(e.from);
    if (!src.stmt) continue;
    const Stmt& s = *src.stmt;
    if (src.kind == NodeKind::Stmt && e.kind == EdgeKind::Intraproc) {
      if (s.kind == Stmt::Kind::Register) {
        ann.push_back({s.implicit_emit ? EventOp::Kind::EmitRegister
                                       : EventOp::Kind::Register,
                       hid(s.callee)});
      } else if (s.kind == Stmt::Kind::RegisterAsync) {
        ann.push_back({EventOp::Kind::EmitRegister, hid(s.callee)});
      }
    } else if (src.kind == NodeKind::CallSite) {
      std::set<FuncId> bypassed;
      if (s.kind == Stmt::Kind::Emit) {
        if (e.kind != EdgeKind::Call && e.kind != EdgeKind::CallToReturn) continue;
        for (FuncId h : sync_handlers(s.event)) {
          ann.push_back({EventOp::Kind::Emit, hid(h)});
          if (e.kind == EdgeKind::CallToReturn) {
            bypassed.insert(effects[h].begin(), effects[h].end());
          }
        }
      } else if (e.kind == EdgeKind::CallToReturn) {
        bypassed = effects[s.callee];
      }
      for (FuncId h : bypassed) ann.push_back({EventOp::Kind::CalleeEffect, hid(h)});
    }
  }

  lang::for_each_stmt(p, [&](const Stmt& s, FuncId f) {
    if (s.kind == Stmt::Kind::Emit && sync_handlers(s.event).empty()) {
      const std::string file = p.files.empty() ? "<input>" : p.files[s.loc.file];
      out.warnings.push_back(file + ":" + std::to_string(s.loc.line) +
                             ": event '" + s.event + "' emitted in '" +
                             p.functions[f].name + "' has no registered handler");
    }
  });

  out.graph = b.g;
  return out;
}

}  // namespace evflow
