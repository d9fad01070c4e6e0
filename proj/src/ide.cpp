#include "evflow/ide.hpp"

#include <algorithm>
#include <sstream>

namespace evflow {

LabeledExplodedSupergraph::LabeledExplodedSupergraph(
    std::shared_ptr<const ExplodedSupergraph> g, std::size_t handler_count)
    : g_(std::move(g)),
      handler_count_(handler_count),
      edge_labels_(g_->graph().edges().size()) {}

void LabeledExplodedSupergraph::set_edge_label(EdgeId e, HandlerMicroFn f) {
  edge_labels_.at(e) = std::move(f);
}

void LabeledExplodedSupergraph::set_label(EdgeId e, FactId d1, FactId d2,
                                          HandlerMicroFn f) {
  overrides_[{e, d1, d2}] = std::move(f);
}

const HandlerMicroFn& LabeledExplodedSupergraph::label(EdgeId e, FactId d1,
                                                       FactId d2) const {
  if (!overrides_.empty()) {
    auto it = overrides_.find({e, d1, d2});
    if (it != overrides_.end()) return it->second;
  }
  return edge_labels_[e];
}

IdeSolver::IdeSolver(const LabeledExplodedSupergraph& g) : g_(g) {}

HandlerMicroFn IdeSolver::compose(const HandlerMicroFn& g,
                                  const HandlerMicroFn& f) {
  std::size_t work = 0;
  HandlerMicroFn out = hmf_compose(g, f, &work);
  ++stats_.compositions;
  stats_.max_op_work = std::max(stats_.max_op_work, work);
  return out;
}

HandlerMicroFn IdeSolver::meet(const HandlerMicroFn& f, const HandlerMicroFn& g) {
  std::size_t work = 0;
  HandlerMicroFn out = hmf_meet(f, g, &work);
  ++stats_.meets;
  stats_.max_op_work = std::max(stats_.max_op_work, work);
  return out;
}

HStateMap IdeSolver::apply(const HandlerMicroFn& f, const HStateMap& m) {
  std::size_t work = 0;
  HStateMap out = hmf_apply(f, m, &work);
  stats_.max_op_work = std::max(stats_.max_op_work, work);
  return out;
}

HStateMap IdeSolver::meet(const HStateMap& a, const HStateMap& b) {
  return hstate_map_meet(a, b);
}

void IdeSolver::propagate(const JumpKey& k, const HandlerMicroFn& f) {
  auto it = jump_.find(k);
  if (it == jump_.end()) {
    jump_.emplace(k, f);
    at_[{k.n, k.d2}].insert({k.s, k.d1});
    from_ctx_[{k.s, k.d1}].insert({k.n, k.d2});
  } else {
    HandlerMicroFn merged = meet(it->second, f);
    if (merged == it->second) return;
    it->second = std::move(merged);
  }
  ++updates_[k];
  if (queued_.insert(k).second) worklist_.push_back(k);
}

void IdeSolver::run_phase1() {
  while (head_ < worklist_.size()) {
    const JumpKey k = worklist_[head_++];
    queued_.erase(k);
    ++stats_.steps;
    process(k);
  }
  worklist_.clear();
  head_ = 0;
}

void IdeSolver::add_summary(NodeId c, FactId dc, NodeId r, FactId dr,
                            const HandlerMicroFn& f) {
  const std::pair<Key, Key> key{{c, dc}, {r, dr}};
  auto it = summary_.find(key);
  if (it == summary_.end()) {
    it = summary_.emplace(key, f).first;
    summary_at_[{c, dc}].insert({r, dr});
  } else {
    HandlerMicroFn merged = meet(it->second, f);
    if (merged == it->second) return;
    it->second = std::move(merged);
  }
  const HandlerMicroFn sum = it->second;
  auto ctxs = at_.find({c, dc});
  if (ctxs == at_.end()) return;
  const std::set<Key> copy = ctxs->second;
  for (const Key& ctx : copy) {
    const HandlerMicroFn& j = jump_.at({ctx.n, ctx.d, c, dc});
    propagate({ctx.n, ctx.d, r, dr}, compose(sum, j));
  }
}

void IdeSolver::apply_end_summary(NodeId c, FactId dc, NodeId start, FactId ds,
                                  NodeId exit, FactId de) {
  const ExplodedSupergraph& xg = g_.exploded();
  const Supergraph& sg = xg.graph();
  const HandlerMicroFn body = jump_.at({start, ds, exit, de});
  for (EdgeId ce : sg.out_edges(c)) {
    const Edge& call = sg.edge(ce);
    if (call.to != start ||
        (call.kind != EdgeKind::Call && call.kind != EdgeKind::Dispatch)) {
      continue;
    }
    const auto& ts = xg.targets(ce, dc);
    if (std::find(ts.begin(), ts.end(), ds) == ts.end()) continue;
    const HandlerMicroFn through = compose(body, g_.label(ce, dc, ds));
    for (EdgeId re : sg.out_edges(exit)) {
      const Edge& ret = sg.edge(re);
      if (ret.kind != EdgeKind::Return || ret.call_site != c) continue;
      for (FactId d5 : xg.targets(re, de)) {
        add_summary(c, dc, ret.to, d5, compose(g_.label(re, de, d5), through));
      }
    }
  }
}

void IdeSolver::process(const JumpKey& k) {
  const ExplodedSupergraph& xg = g_.exploded();
  const Supergraph& sg = xg.graph();
  const HandlerMicroFn f = jump_.at(k);
  for (EdgeId e : sg.out_edges(k.n)) {
    const Edge& edge = sg.edge(e);
    switch (edge.kind) {
      case EdgeKind::Intraproc:
      case EdgeKind::ToEventLoop:
      case EdgeKind::CallToReturn:
        for (FactId d3 : xg.targets(e, k.d2)) {
          propagate({k.s, k.d1, edge.to, d3}, compose(g_.label(e, k.d2, d3), f));
        }
        break;
      case EdgeKind::Call:
      case EdgeKind::Dispatch: {
        auto sums = summary_at_.find({k.n, k.d2});
        if (sums != summary_at_.end()) {
          const std::set<Key> copy = sums->second;
          for (const Key& rs : copy) {
            const HandlerMicroFn s = summary_.at({{k.n, k.d2}, rs});
            propagate({k.s, k.d1, rs.n, rs.d}, compose(s, f));
          }
        }
        for (FactId d3 : xg.targets(e, k.d2)) {
          const Key callee{edge.to, d3};
          if (!incoming_[callee].insert({k.n, k.d2}).second) continue;
          propagate({edge.to, d3, edge.to, d3}, HandlerMicroFn{});
          const std::set<Key> exits = end_sum_[callee];
          for (const Key& ex : exits) {
            apply_end_summary(k.n, k.d2, edge.to, d3, ex.n, ex.d);
          }
        }
        break;
      }
      case EdgeKind::Return:
        break;
    }
  }

  if (sg.is_exit(k.s, k.n)) {
    const Key ctx{k.s, k.d1};
    end_sum_[ctx].insert({k.n, k.d2});
    const std::set<Key> callers = incoming_[ctx];
    for (const Key& c : callers) {
      apply_end_summary(c.n, c.d, k.s, k.d1, k.n, k.d2);
    }
  }
}

void IdeSolver::phase2() {
  const ExplodedSupergraph& xg = g_.exploded();
  const Supergraph& sg = xg.graph();

  // (i) values at procedure entries, pushed through call and dispatch edges.
  std::vector<Key> work;
  std::set<Key> queued;
  for (const auto& [k, v] : val_) {
    work.push_back(k);
    queued.insert(k);
  }
  for (std::size_t head = 0; head < work.size(); ++head) {
    const Key s = work[head];
    queued.erase(s);
    const HStateMap vs = val_.at(s);
    auto reach = from_ctx_.find(s);
    if (reach == from_ctx_.end()) continue;
    for (const Key& nd : reach->second) {
      bool calls = false;
      for (EdgeId e : sg.out_edges(nd.n)) {
        const EdgeKind k = sg.edge(e).kind;
        calls |= k == EdgeKind::Call || k == EdgeKind::Dispatch;
      }
      if (!calls) continue;
      const HStateMap at_call = apply(jump_.at({s.n, s.d, nd.n, nd.d}), vs);
      for (EdgeId e : sg.out_edges(nd.n)) {
        const Edge& edge = sg.edge(e);
        if (edge.kind != EdgeKind::Call && edge.kind != EdgeKind::Dispatch) continue;
        for (FactId d3 : xg.targets(e, nd.d)) {
          const Key callee{edge.to, d3};
          const HStateMap v = apply(g_.label(e, nd.d, d3), at_call);
          auto it = val_.find(callee);
          bool changed = false;
          if (it == val_.end()) {
            val_.emplace(callee, v);
            changed = true;
          } else {
            HStateMap merged = meet(it->second, v);
            if (!(merged == it->second)) {
              it->second = std::move(merged);
              changed = true;
            }
          }
          if (changed && queued.insert(callee).second) work.push_back(callee);
        }
      }
    }
  }

  // (ii) every node from its context's entry value.
  values_.assign(sg.nodes().size(), {});
  for (const auto& [k, f] : jump_) {
    auto sv = val_.find({k.s, k.d1});
    if (sv == val_.end()) continue;
    const HStateMap v = apply(f, sv->second);
    Environment& env = values_[k.n];
    auto it = env.find(k.d2);
    if (it == env.end()) {
      env.emplace(k.d2, v);
    } else {
      it->second = meet(it->second, v);
    }
  }
}

void IdeSolver::solve(NodeId entry, const Environment& init) {
  for (const auto& [d, m] : init) {
    propagate({entry, d, entry, d}, HandlerMicroFn{});
    val_[{entry, d}] = m;
  }
  run_phase1();
  phase2();
}

std::size_t IdeSolver::reprocess_all() {
  std::map<JumpKey, HandlerMicroFn> before = jump_;
  for (const auto& [k, f] : jump_) {
    if (queued_.insert(k).second) worklist_.push_back(k);
  }
  run_phase1();
  std::size_t changed = jump_.size() - before.size();
  for (const auto& [k, f] : before) {
    if (!(jump_.at(k) == f)) ++changed;
  }
  return changed;
}

IdeResult IdeSolver::result() const {
  IdeResult r;
  r.values = values_;
  r.stats = stats_;
  r.stats.jump_entries = jump_.size();
  for (const auto& [k, n] : updates_) {
    r.stats.max_entry_updates = std::max(r.stats.max_entry_updates, n);
  }
  return r;
}

std::string IdeSolver::dump_jump_functions(
    const std::vector<std::string>& handler_names) const {
  const ExplodedSupergraph& xg = g_.exploded();
  const Supergraph& sg = xg.graph();
  std::ostringstream os;
  for (const auto& [k, f] : jump_) {
    os << "[" << k.s << " " << sg.label(k.s) << "]/" << xg.fact_name(k.d1)
       << " -> [" << k.n << " " << sg.label(k.n) << "]/" << xg.fact_name(k.d2)
       << " : " << to_string(f, handler_names) << '\n';
  }
  return os.str();
}

IdeResult solve_ide(const LabeledExplodedSupergraph& g, NodeId entry,
                    const Environment& init) {
  IdeSolver s(g);
  s.solve(entry, init);
  return s.result();
}

}  // namespace evflow
