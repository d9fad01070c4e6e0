#include "evflow/transform.hpp"

#include "evflow/uninit.hpp"

namespace evflow {

MicroFn micro_fn_for(EventOp::Kind k) {
  switch (k) {
    case EventOp::Kind::Register:
      return MicroFn::register_fn();
    case EventOp::Kind::Emit:
      return MicroFn::emit_fn();
    case EventOp::Kind::Invoke:
      return MicroFn::invoke_fn();
    case EventOp::Kind::EmitRegister:
    case EventOp::Kind::CalleeEffect:
      return mf_compose(MicroFn::emit_fn(), MicroFn::register_fn());
  }
  return MicroFn::identity();
}

HandlerMicroFn label_for(const EdgeAnnotation& ann) {
  HandlerMicroFn f;
  for (const EventOp& op : ann) {
    f = hmf_compose(HandlerMicroFn::single(op.handler, micro_fn_for(op.kind)), f);
  }
  return f;
}

std::shared_ptr<const LabeledExplodedSupergraph> transform(
    std::shared_ptr<const ExplodedSupergraph> g,
    const std::vector<EdgeAnnotation>& annotations, std::size_t handler_count) {
  const std::size_t edges = g->graph().edges().size();
  if (annotations.size() < edges) {
    throw MissingAnnotation(static_cast<EdgeId>(annotations.size()));
  }
  auto out = std::make_shared<LabeledExplodedSupergraph>(std::move(g), handler_count);
  for (EdgeId e = 0; e < edges; ++e) out->set_edge_label(e, label_for(annotations[e]));
  return out;
}

FilteredResult untransform(const IdeResult& r) {
  FilteredResult out;
  out.facts.resize(r.values.size());
  out.reachable.assign(r.values.size(), false);
  for (NodeId n = 0; n < r.values.size(); ++n) {
    for (const auto& [d, m] : r.values[n]) {
      const bool keep = !m.any_infeasible();
      if (d == kZeroFact) {
        out.reachable[n] = keep;
      } else if (keep) {
        out.facts[n].insert(d);
      } else {
        out.provenance.emplace(std::make_pair(n, d), m);
      }
    }
  }
  return out;
}

ClientFactory uninit_client() {
  return [](const lang::Program& p) -> std::unique_ptr<IfdsProblem> {
    return std::make_unique<UninitProblem>(p);
  };
}

Environment initial_environment() { return {{kZeroFact, HStateMap{}}}; }

EventAwareAnalysis analyze_event_aware(std::shared_ptr<const lang::Program> p,
                                       const EventModel& model,
                                       const ClientFactory& client) {
  EventAwareAnalysis a;
  a.program = p;
  a.build = build_supergraph(p, model);
  const auto problem = client(*p);
  a.exploded = explode(a.build.graph, *problem);
  const NodeId entry = a.build.graph->entry();
  a.ifds = solve_ifds(*a.exploded, entry);
  a.labeled = transform(a.exploded, a.build.annotations, a.build.handlers.size());
  a.ide = solve_ide(*a.labeled, entry, initial_environment());
  a.filtered = untransform(a.ide);
  return a;
}

}  // namespace evflow
