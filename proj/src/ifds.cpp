#include "evflow/ifds.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace evflow {

// ---- RepRelation -----------------------------------------------------------

void RepRelation::canonicalize() {
  pairs_.emplace_back(kZeroFact, kZeroFact);
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  std::set<FactId> gen;
  for (const auto& [a, b] : pairs_) {
    if (a == kZeroFact && b != kZeroFact) gen.insert(b);
  }
  std::erase_if(pairs_, [&](const Pair& p) {
    return p.first != kZeroFact && (p.second == kZeroFact || gen.count(p.second));
  });
}

RepRelation RepRelation::identity(std::size_t num_facts) {
  RepRelation r;
  for (FactId d = 1; d <= num_facts; ++d) r.pairs_.emplace_back(d, d);
  return r;
}

RepRelation RepRelation::from_pairs(std::vector<Pair> pairs) {
  RepRelation r;
  r.pairs_ = std::move(pairs);
  r.canonicalize();
  return r;
}

RepRelation RepRelation::from_function(
    const std::function<FactSet(const FactSet&)>& f, std::size_t num_facts) {
  std::vector<Pair> pairs;
  const FactSet base = f({});
  for (FactId d : base) pairs.emplace_back(kZeroFact, d);
  for (FactId a = 1; a <= num_facts; ++a) {
    for (FactId b : f({a})) {
      if (!base.count(b)) pairs.emplace_back(a, b);
    }
  }
  return from_pairs(std::move(pairs));
}

bool RepRelation::contains(FactId a, FactId b) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), Pair{a, b});
}

std::vector<FactId> RepRelation::targets(FactId a) const {
  std::vector<FactId> out;
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), Pair{a, 0});
  for (; it != pairs_.end() && it->first == a; ++it) out.push_back(it->second);
  return out;
}

FactSet apply_rel(const RepRelation& r, const FactSet& s) {
  FactSet out;
  for (const auto& [a, b] : r.pairs()) {
    if (b == kZeroFact) continue;
    if (a == kZeroFact || s.count(a)) out.insert(b);
  }
  return out;
}

RepRelation compose_rel(const RepRelation& r1, const RepRelation& r2) {
  std::vector<RepRelation::Pair> out;
  for (const auto& [x, y] : r1.pairs()) {
    for (FactId z : r2.targets(y)) out.emplace_back(x, z);
  }
  return RepRelation::from_pairs(std::move(out));
}

RepRelation meet_rel(const RepRelation& r1, const RepRelation& r2) {
  std::vector<RepRelation::Pair> out = r1.pairs();
  out.insert(out.end(), r2.pairs().begin(), r2.pairs().end());
  return RepRelation::from_pairs(std::move(out));
}

std::string to_string(const RepRelation& r,
                      const std::function<std::string(FactId)>& name) {
  auto nm = [&](FactId d) {
    if (d == kZeroFact) return std::string("0");
    return name ? name(d) : std::to_string(d);
  };
  std::string out = "{";
  bool first = true;
  for (const auto& [a, b] : r.pairs()) {
    if (!first) out += ", ";
    first = false;
    out += "<" + nm(a) + "," + nm(b) + ">";
  }
  return out + "}";
}

// ---- ExplodedSupergraph ----------------------------------------------------

ExplodedSupergraph::ExplodedSupergraph(std::shared_ptr<const Supergraph> g,
                                       std::vector<RepRelation> relations,
                                       std::size_t num_facts,
                                       std::vector<std::string> fact_names)
    : graph_(std::move(g)),
      relations_(std::move(relations)),
      num_facts_(num_facts),
      fact_names_(std::move(fact_names)) {
  succ_.resize(relations_.size());
  for (std::size_t e = 0; e < relations_.size(); ++e) {
    for (const auto& [a, b] : relations_[e].pairs()) succ_[e][a].push_back(b);
  }
}

const std::vector<FactId>& ExplodedSupergraph::targets(EdgeId e, FactId d) const {
  static const std::vector<FactId> kNone;
  auto it = succ_[e].find(d);
  return it == succ_[e].end() ? kNone : it->second;
}

std::size_t ExplodedSupergraph::exploded_edge_count() const {
  std::size_t n = 0;
  for (const auto& r : relations_) n += r.pairs().size();
  return n;
}

std::shared_ptr<const ExplodedSupergraph> explode(
    std::shared_ptr<const Supergraph> g, const IfdsProblem& problem) {
  std::vector<RepRelation> rels;
  rels.reserve(g->edges().size());
  for (const Edge& e : g->edges()) rels.push_back(problem.flow(*g, e.id));
  std::vector<std::string> names = {"0"};
  for (FactId d = 1; d <= problem.num_facts(); ++d) {
    names.push_back(problem.fact_name(d));
  }
  return std::make_shared<ExplodedSupergraph>(std::move(g), std::move(rels),
                                              problem.num_facts(),
                                              std::move(names));
}

// ---- Tabulation ------------------------------------------------------------

IfdsSolver::IfdsSolver(const ExplodedSupergraph& g) : g_(g) {}

void IfdsSolver::solve(NodeId entry) {
  propagate({entry, kZeroFact, entry, kZeroFact});
  run();
}

std::size_t IfdsSolver::reprocess_all() {
  const std::size_t before = path_edges_.size();
  worklist_.assign(path_edges_.begin(), path_edges_.end());
  head_ = 0;
  run();
  return path_edges_.size() - before;
}

void IfdsSolver::propagate(const PathEdge& pe) {
  if (!path_edges_.insert(pe).second) return;
  at_[{pe.n, pe.d2}].insert({pe.s, pe.d1});
  worklist_.push_back(pe);
}

void IfdsSolver::run() {
  while (head_ < worklist_.size()) {
    const PathEdge pe = worklist_[head_++];
    ++steps_;
    process(pe);
  }
  worklist_.clear();
  head_ = 0;
}

void IfdsSolver::add_summary(NodeId c, FactId dc, NodeId r, FactId dr) {
  if (!summary_[{c, dc}].insert({r, dr}).second) return;
  ++summary_count_;
  auto it = at_.find({c, dc});
  if (it == at_.end()) return;
  const std::set<Key> ctxs = it->second;
  for (const Key& ctx : ctxs) propagate({ctx.n, ctx.d, r, dr});
}

// A callee exit fact (exit, de) meets a caller (c, dc): follow the return
// edges that belong to c.
void IfdsSolver::apply_end_summary(NodeId c, FactId dc, NodeId exit, FactId de) {
  const Supergraph& sg = g_.graph();
  for (EdgeId e : sg.out_edges(exit)) {
    const Edge& edge = sg.edge(e);
    if (edge.kind != EdgeKind::Return || edge.call_site != c) continue;
    for (FactId d5 : g_.targets(e, de)) add_summary(c, dc, edge.to, d5);
  }
}

void IfdsSolver::process(const PathEdge& pe) {
  const Supergraph& sg = g_.graph();
  for (EdgeId e : sg.out_edges(pe.n)) {
    const Edge& edge = sg.edge(e);
    switch (edge.kind) {
      case EdgeKind::Intraproc:
      case EdgeKind::ToEventLoop:
      case EdgeKind::CallToReturn:
        for (FactId d3 : g_.targets(e, pe.d2)) {
          propagate({pe.s, pe.d1, edge.to, d3});
        }
        break;
      case EdgeKind::Call:
      case EdgeKind::Dispatch: {
        for (const Key& sum : summary_[{pe.n, pe.d2}]) {
          propagate({pe.s, pe.d1, sum.n, sum.d});
        }
        for (FactId d3 : g_.targets(e, pe.d2)) {
          const Key callee{edge.to, d3};
          if (!incoming_[callee].insert({pe.n, pe.d2}).second) continue;
          propagate({edge.to, d3, edge.to, d3});
          const std::set<Key> exits = end_sum_[callee];
          for (const Key& ex : exits) apply_end_summary(pe.n, pe.d2, ex.n, ex.d);
        }
        break;
      }
      case EdgeKind::Return:
        break;  // handled once per exit below
    }
  }

  if (sg.is_exit(pe.s, pe.n)) {
    const Key ctx{pe.s, pe.d1};
    if (end_sum_[ctx].insert({pe.n, pe.d2}).second) {
      const std::set<Key> callers = incoming_[ctx];
      for (const Key& c : callers) apply_end_summary(c.n, c.d, pe.n, pe.d2);
    }
  }
}

IfdsResult IfdsSolver::result() const {
  IfdsResult r;
  const std::size_t n = g_.graph().nodes().size();
  r.facts.resize(n);
  r.reachable.assign(n, false);
  for (const PathEdge& pe : path_edges_) {
    if (pe.d2 == kZeroFact) {
      r.reachable[pe.n] = true;
    } else {
      r.facts[pe.n].insert(pe.d2);
    }
  }
  r.steps = steps_;
  r.path_edges = path_edges_.size();
  r.summary_edges = summary_count_;
  return r;
}

IfdsResult solve_ifds(const ExplodedSupergraph& g, NodeId entry) {
  IfdsSolver s(g);
  s.solve(entry);
  return s.result();
}

std::vector<FactSet> unbalanced_reach(const ExplodedSupergraph& g, NodeId entry) {
  const Supergraph& sg = g.graph();
  std::vector<FactSet> seen(sg.nodes().size());
  std::deque<std::pair<NodeId, FactId>> q;
  std::set<std::pair<NodeId, FactId>> visited = {{entry, kZeroFact}};
  q.emplace_back(entry, kZeroFact);
  while (!q.empty()) {
    auto [n, d] = q.front();
    q.pop_front();
    if (d != kZeroFact) seen[n].insert(d);
    for (EdgeId e : sg.out_edges(n)) {
      for (FactId d2 : g.targets(e, d)) {
        if (visited.insert({sg.edge(e).to, d2}).second) {
          q.emplace_back(sg.edge(e).to, d2);
        }
      }
    }
  }
  return seen;
}

// ---- Brute force -----------------------------------------------------------

namespace {

struct Enumerator {
  const Supergraph& g;
  const std::function<const RepRelation&(EdgeId)>& flow;
  std::size_t max_len;
  std::size_t budget;
  BruteForceResult out;
  // (node, stack, facts) -> most remaining budget it was explored with.
  std::map<std::tuple<NodeId, std::vector<NodeId>, FactSet>, std::size_t> memo;
  std::vector<NodeId> stack;

  void visit(NodeId n, const FactSet& facts, std::size_t remaining) {
    if (++out.paths > budget) {
      throw PathBudgetExceeded("valid-path enumeration exceeded " +
                               std::to_string(budget) + " steps");
    }
    out.covered[n] = true;
    out.facts[n].insert(facts.begin(), facts.end());
    if (remaining == 0) return;
    auto key = std::make_tuple(n, stack, facts);
    auto it = memo.find(key);
    if (it != memo.end() && it->second >= remaining) return;
    memo[key] = remaining;

    for (EdgeId e : g.out_edges(n)) {
      const Edge& edge = g.edge(e);
      const FactSet next = apply_rel(flow(e), facts);
      switch (edge.kind) {
        case EdgeKind::Call:
        case EdgeKind::Dispatch:
          stack.push_back(edge.call_site);
          visit(edge.to, next, remaining - 1);
          stack.pop_back();
          break;
        case EdgeKind::Return: {
          if (stack.empty() || stack.back() != edge.call_site) break;
          const NodeId top = stack.back();
          stack.pop_back();
          visit(edge.to, next, remaining - 1);
          stack.push_back(top);
          break;
        }
        default:
          visit(edge.to, next, remaining - 1);
      }
    }
  }
};

}  // namespace

BruteForceResult mvp_bruteforce(const Supergraph& g,
                                const std::function<const RepRelation&(EdgeId)>& flow,
                                NodeId entry, std::size_t max_len,
                                std::size_t path_budget) {
  Enumerator en{g, flow, max_len, path_budget, {}, {}, {}};
  en.out.facts.resize(g.nodes().size());
  en.out.covered.assign(g.nodes().size(), false);
  en.visit(entry, {}, max_len);
  return std::move(en.out);
}

}  // namespace evflow
