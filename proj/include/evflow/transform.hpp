#pragma once

// T: label the exploded supergraph with event micro-functions.
// U: project the IDE result back onto fact sets, dropping every fact whose
// handler-state map sends some handler to X.

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "evflow/event_model.hpp"
#include "evflow/ide.hpp"
#include "evflow/ifds.hpp"
#include "evflow/lang.hpp"
#include "evflow/supergraph.hpp"

namespace evflow {

class MissingAnnotation : public std::runtime_error {
 public:
  explicit MissingAnnotation(EdgeId e)
      : std::runtime_error("no event annotation for edge " + std::to_string(e)),
        edge_(e) {}
  EdgeId edge() const { return edge_; }

 private:
  EdgeId edge_;
};

MicroFn micro_fn_for(EventOp::Kind k);

/// Composes an edge's operations in order into one separable transformer.
HandlerMicroFn label_for(const EdgeAnnotation& ann);

std::shared_ptr<const LabeledExplodedSupergraph> transform(
    std::shared_ptr<const ExplodedSupergraph> g,
    const std::vector<EdgeAnnotation>& annotations, std::size_t handler_count);

struct FilteredResult {
  std::vector<FactSet> facts;  // per node, client facts only
  std::vector<bool> reachable;  // the zero fact survives at the node
  /// Excluded (node, fact) pairs with the handler states that condemned them.
  std::map<std::pair<NodeId, FactId>, HStateMap> provenance;
};

FilteredResult untransform(const IdeResult& r);

using ClientFactory =
    std::function<std::unique_ptr<IfdsProblem>(const lang::Program&)>;

/// The possibly-uninitialized-variables client.
ClientFactory uninit_client();

struct EventAwareAnalysis {
  std::shared_ptr<const lang::Program> program;
  SupergraphBuild build;
  std::shared_ptr<const ExplodedSupergraph> exploded;
  std::shared_ptr<const LabeledExplodedSupergraph> labeled;
  IfdsResult ifds;
  IdeResult ide;
  FilteredResult filtered;

  const Supergraph& graph() const { return *build.graph; }
};

/// Entry environment: the zero fact maps every handler to S.
Environment initial_environment();

EventAwareAnalysis analyze_event_aware(std::shared_ptr<const lang::Program> p,
                                       const EventModel& model = EventModel::builtin(),
                                       const ClientFactory& client = uninit_client());

}  // namespace evflow
