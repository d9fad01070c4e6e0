#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <tuple>

#include "evflow/ide.hpp"
#include "evflow/program_gen.hpp"
#include "test_support.hpp"

using namespace evflow;
using namespace evflow::testing;

namespace {

class PathBudget : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Meet over valid exploded paths of bounded length, composing the edge
// labels along each path. Reference for the IDE values.
struct ValuePaths {
  const LabeledExplodedSupergraph& lg;
  std::size_t budget;
  std::vector<Environment> values;
  std::vector<NodeId> stack;
  std::map<std::tuple<NodeId, FactId, std::vector<NodeId>, std::vector<HStateMap::Entry>>,
           std::size_t>
      memo;
  std::size_t steps = 0;

  void visit(NodeId n, FactId d, const HStateMap& m, std::size_t remaining) {
    if (++steps > budget) throw PathBudget("over budget");
    auto [it, fresh] = values[n].emplace(d, m);
    if (!fresh) it->second = hstate_map_meet(it->second, m);
    if (remaining == 0) return;
    auto key = std::make_tuple(n, d, stack, m.entries());
    auto seen = memo.find(key);
    if (seen != memo.end() && seen->second >= remaining) return;
    memo[key] = remaining;

    const ExplodedSupergraph& xg = lg.exploded();
    const Supergraph& g = xg.graph();
    for (EdgeId e : g.out_edges(n)) {
      const Edge& edge = g.edge(e);
      if (edge.kind == EdgeKind::Return && (stack.empty() || stack.back() != edge.call_site)) {
        continue;
      }
      for (FactId d2 : xg.relation(e).targets(d)) {
        const HStateMap m2 = hmf_apply(lg.label(e, d, d2), m);
        switch (edge.kind) {
          case EdgeKind::Call:
          case EdgeKind::Dispatch:
            stack.push_back(edge.call_site);
            visit(edge.to, d2, m2, remaining - 1);
            stack.pop_back();
            break;
          case EdgeKind::Return: {
            const NodeId top = stack.back();
            stack.pop_back();
            visit(edge.to, d2, m2, remaining - 1);
            stack.push_back(top);
            break;
          }
          default:
            visit(edge.to, d2, m2, remaining - 1);
        }
      }
    }
  }
};

std::vector<Environment> enumerate_values(const LabeledExplodedSupergraph& lg, NodeId entry,
                                          std::size_t max_len, std::size_t budget) {
  ValuePaths vp{lg, budget, {}, {}, {}, 0};
  vp.values.resize(lg.exploded().graph().nodes().size());
  vp.visit(entry, kZeroFact, HStateMap{}, max_len);
  return vp.values;
}

}  // namespace

TEST(IdeSolver, IdentityLabelsReduceToIfds) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto a = analyze(generate_program(seed));
    LabeledExplodedSupergraph plain(a.exploded, 0);
    const IdeResult r = solve_ide(plain, a.graph().entry(), initial_environment());
    for (NodeId n = 0; n < a.graph().nodes().size(); ++n) {
      FactSet facts;
      for (const auto& [d, m] : r.values[n]) {
        if (d != kZeroFact) facts.insert(d);
        ASSERT_TRUE(m.entries().empty());
      }
      ASSERT_EQ(facts, a.ifds.facts[n]) << generate_program(seed);
      ASSERT_EQ(r.has(n, kZeroFact), bool(a.ifds.reachable[n]));
    }
  }
}

TEST(IdeSolver, DoorHandlerStates) {
  const auto a = analyze_corpus("door");
  const NodeId use = node_at_line(a, 13);
  const FactId txt = fact_named(*a.program, "txt");
  // The only way txt reaches the print skips hdlOpen's emission of close.
  ASSERT_TRUE(a.ide.has(use, txt));
  EXPECT_EQ(states(a, a.ide.at(use, txt)), "{hdlOpen: E, hdlClose: X}");
  EXPECT_EQ(states(a, a.ide.at(use, kZeroFact)), "{hdlOpen: E, hdlClose: E}");
  // Before anything happens every handler is in its start state.
  EXPECT_EQ(states(a, a.ide.at(a.graph().entry(), kZeroFact)), "{hdlOpen: S, hdlClose: S}");
  // hdlOpen runs after its registration and emission.
  EXPECT_EQ(a.ide.at(start_of(a, "hdlOpen"), kZeroFact).get(0), HState::E);
}

TEST(IdeSolver, FixpointIsStable) {
  for (const char* stem : {"door", "door_mutated", "timer", "server", "dirstat"}) {
    const auto a = analyze_corpus(stem);
    IdeSolver s(*a.labeled);
    s.solve(a.graph().entry(), initial_environment());
    EXPECT_EQ(s.reprocess_all(), 0u) << stem;
    EXPECT_EQ(s.result().values, a.ide.values) << stem;
  }
}

TEST(IdeSolver, DumpIsStable) {
  const auto a = analyze_corpus("door");
  IdeSolver s1(*a.labeled), s2(*a.labeled);
  s1.solve(a.graph().entry(), initial_environment());
  s2.solve(a.graph().entry(), initial_environment());
  const std::string dump = s1.dump_jump_functions(a.build.handler_names);
  EXPECT_EQ(dump, s2.dump_jump_functions(a.build.handler_names));
  EXPECT_EQ(static_cast<std::size_t>(std::count(dump.begin(), dump.end(), '\n')),
            a.ide.stats.jump_entries);
  EXPECT_NE(dump.find("txt"), std::string::npos);
  EXPECT_NE(dump.find("hdlClose"), std::string::npos);
}

TEST(IdeSolver, ValuesEqualMeetOverValidPaths) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; checked < 25 && seed < 400; ++seed) {
    const std::string text = generate_program(seed, GenParams::small());
    const auto a = analyze(text);
    std::vector<Environment> ref;
    try {
      ref = enumerate_values(*a.labeled, a.graph().entry(), 40, 200000);
    } catch (const PathBudget&) {
      continue;
    }
    ++checked;
    for (NodeId n = 0; n < a.graph().nodes().size(); ++n) {
      ASSERT_EQ(a.ide.values[n], ref[n]) << a.graph().label(n) << "\n" << text;
    }
  }
  EXPECT_EQ(checked, 25u);
}

TEST(IdeSolver, StatsAreBoundedByHandlerCount) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto a = analyze(generate_program(seed));
    ASSERT_LE(a.ide.stats.max_op_work, a.build.handlers.size());
    ASSERT_GE(a.ide.stats.steps, a.ide.stats.jump_entries);
  }
}
