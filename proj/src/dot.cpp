#include <set>

#include "evflow/ifds.hpp"
#include "evflow/supergraph.hpp"

namespace evflow {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

bool interprocedural(EdgeKind k) {
  return k != EdgeKind::Intraproc && k != EdgeKind::CallToReturn;
}

}  // namespace

void write_dot(std::ostream& os, const Supergraph& g, const DotOptions& opts) {
  std::set<std::pair<NodeId, NodeId>> bold;
  for (std::size_t i = 1; i < opts.highlight_path.size(); ++i) {
    bold.insert({opts.highlight_path[i - 1], opts.highlight_path[i]});
  }
  const lang::Program& p = g.program();
  os << "digraph supergraph {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& f : p.functions) {
    os << "  subgraph cluster_" << f.id << " {\n    label=\"" << escape(f.name)
       << "\";\n";
    for (const Node& n : g.nodes()) {
      if (n.func != f.id) continue;
      os << "    n" << n.id << " [label=\"" << escape(g.label(n.id)) << "\"];\n";
    }
    os << "  }\n";
  }
  os << "  n" << g.event_loop() << " [label=\"event loop\", shape=ellipse];\n";
  for (const Edge& e : g.edges()) {
    os << "  n" << e.from << " -> n" << e.to << " [";
    std::string style = interprocedural(e.kind) ? "dashed" : "solid";
    if (bold.count({e.from, e.to})) style += ",bold";
    os << "style=\"" << style << "\"";
    std::string label;
    if (opts.annotations && e.id < opts.annotations->size()) {
      for (const EventOp& op : (*opts.annotations)[e.id]) {
        if (!label.empty()) label += ' ';
        label += to_string(op.kind);
        label += '(';
        label += opts.handler_names && op.handler < opts.handler_names->size()
                     ? (*opts.handler_names)[op.handler]
                     : std::to_string(op.handler);
        label += ')';
      }
    }
    if (!label.empty()) os << ", label=\"" << escape(label) << "\"";
    os << "];\n";
  }
  os << "}\n";
}

void write_exploded_dot(std::ostream& os, const ExplodedSupergraph& xg,
                        const IfdsResult* highlight) {
  const Supergraph& g = xg.graph();
  const std::size_t cols = xg.num_facts() + 1;
  os << "digraph exploded {\n  rankdir=TB;\n  node [shape=circle, label=\"\", "
        "width=0.15];\n";
  for (const Node& n : g.nodes()) {
    os << "  subgraph row" << n.id << " {\n    rank=same;\n    r" << n.id
       << " [shape=plaintext, width=2, label=\"" << escape(g.label(n.id))
       << "\"];\n";
    for (FactId d = 0; d < cols; ++d) {
      const bool on = highlight && (d == kZeroFact ? bool(highlight->reachable[n.id])
                                                   : highlight->has(n.id, d));
      os << "    x" << n.id << "_" << d << " [tooltip=\""
         << escape(xg.fact_name(d)) << "\"" << (on ? ", style=filled" : "")
         << "];\n";
    }
    os << "  }\n";
  }
  os << "  // column headers\n";
  for (FactId d = 0; d < cols; ++d) {
    os << "  h" << d << " [shape=plaintext, label=\"" << escape(xg.fact_name(d))
       << "\"];\n";
  }
  for (const Edge& e : g.edges()) {
    const std::string style = interprocedural(e.kind) ? "dashed" : "solid";
    for (const auto& [a, b] : xg.relation(e.id).pairs()) {
      os << "  x" << e.from << "_" << a << " -> x" << e.to << "_" << b
         << " [style=" << style << "];\n";
    }
  }
  os << "}\n";
}

}  // namespace evflow
