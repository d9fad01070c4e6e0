#include <gtest/gtest.h>

#include <random>

#include "evflow/ifds.hpp"
#include "evflow/program_gen.hpp"
#include "evflow/uninit.hpp"
#include "test_support.hpp"

using namespace evflow;
using namespace evflow::testing;

namespace {

// Edge flows given by a table, for exercising the solver on arbitrary
// distributive functions rather than only the shipped client.
class TableProblem final : public IfdsProblem {
 public:
  TableProblem(std::size_t n, std::vector<RepRelation> rels) : n_(n), rels_(std::move(rels)) {}
  std::size_t num_facts() const override { return n_; }
  std::string fact_name(FactId d) const override { return "d" + std::to_string(d); }
  RepRelation flow(const Supergraph&, EdgeId e) const override { return rels_[e]; }

 private:
  std::size_t n_;
  std::vector<RepRelation> rels_;
};

RepRelation random_relation(std::mt19937& rng, std::size_t n) {
  std::vector<RepRelation::Pair> pairs;
  for (FactId a = 0; a <= n; ++a) {
    // Mostly identity-like, with some gens and cross edges.
    if (a != 0 && rng() % 4 != 0) pairs.emplace_back(a, a);
    for (FactId b = 1; b <= n; ++b) {
      if (a != b && rng() % 9 == 0) pairs.emplace_back(a, b);
    }
  }
  return RepRelation::from_pairs(pairs);
}

FactSet random_set(std::mt19937& rng, std::size_t n) {
  FactSet s;
  for (FactId d = 1; d <= n; ++d) {
    if (rng() % 2) s.insert(d);
  }
  return s;
}

FactSet set_union(const FactSet& a, const FactSet& b) {
  FactSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

void expect_matches_bruteforce(const ExplodedSupergraph& xg, NodeId entry,
                               const std::string& context) {
  const IfdsResult r = solve_ifds(xg, entry);
  const BruteForceResult bf = mvp_bruteforce(
      xg.graph(), [&](EdgeId e) -> const RepRelation& { return xg.relation(e); }, entry, 40);
  for (NodeId n = 0; n < xg.graph().nodes().size(); ++n) {
    ASSERT_EQ(bf.covered[n], bool(r.reachable[n])) << xg.graph().label(n) << "\n" << context;
    ASSERT_EQ(bf.facts[n], r.facts[n]) << xg.graph().label(n) << "\n" << context;
  }
}

}  // namespace

TEST(RepRelation, CanonicalForm) {
  const auto r = RepRelation::from_pairs({{0, 2}, {1, 2}, {1, 1}, {3, 0}, {2, 3}});
  EXPECT_EQ(r.pairs(), (std::vector<RepRelation::Pair>{{0, 0}, {0, 2}, {1, 1}, {2, 3}}));
  EXPECT_TRUE(r.contains(0, 0));
  EXPECT_FALSE(r.contains(1, 2));
  EXPECT_EQ(r.targets(0), (std::vector<FactId>{0, 2}));
  EXPECT_EQ(RepRelation::identity(2).pairs(),
            (std::vector<RepRelation::Pair>{{0, 0}, {1, 1}, {2, 2}}));
  EXPECT_EQ(RepRelation().pairs(), (std::vector<RepRelation::Pair>{{0, 0}}));
}

TEST(RepRelation, ApplyComposeMeetAgreeWithSetSemantics) {
  std::mt19937 rng(7);
  constexpr std::size_t n = 5;
  for (int iter = 0; iter < 400; ++iter) {
    const auto r1 = random_relation(rng, n), r2 = random_relation(rng, n);
    const auto a = random_set(rng, n), b = random_set(rng, n);
    // Distributive: f(A u B) = f(A) u f(B), and f(A) always includes f({}).
    ASSERT_EQ(apply_rel(r1, set_union(a, b)), set_union(apply_rel(r1, a), apply_rel(r1, b)));
    ASSERT_EQ(apply_rel(compose_rel(r1, r2), a), apply_rel(r2, apply_rel(r1, a)));
    ASSERT_EQ(apply_rel(meet_rel(r1, r2), a), set_union(apply_rel(r1, a), apply_rel(r2, a)));
    // Tabulating the function gives back the same relation.
    const auto f = [&](const FactSet& s) { return apply_rel(r1, s); };
    ASSERT_EQ(RepRelation::from_function(f, n), r1);
  }
}

TEST(RepRelation, Rendering) {
  const auto r = RepRelation::from_pairs({{0, 1}, {2, 2}});
  EXPECT_EQ(to_string(r), "{<0,0>, <0,1>, <2,2>}");
  EXPECT_EQ(to_string(r, [](FactId d) { return d ? "v" + std::to_string(d) : std::string("0"); }),
            "{<0,0>, <0,v1>, <v2,v2>}");
}

TEST(IfdsSolver, AcyclicStraightLineEqualsBruteForce) {
  // Start, eight statements, end and an idle event loop: acyclic, no calls.
  std::string text;
  for (int i = 0; i < 8; ++i) text += "print(" + std::to_string(i) + ");\n";
  const auto p = parse_shared(text);
  const auto b = build_supergraph(p);
  std::mt19937 rng(11);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<RepRelation> rels;
    for (std::size_t e = 0; e < b.graph->edges().size(); ++e) rels.push_back(random_relation(rng, 4));
    const auto xg = explode(b.graph, TableProblem(4, rels));
    expect_matches_bruteforce(*xg, b.graph->entry(), text);
  }
}

TEST(IfdsSolver, RandomRelationsOnRandomProgramsEqualBruteForce) {
  std::mt19937 rng(12);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::string text = generate_program(seed, GenParams::small());
    const auto b = build_supergraph(parse_shared(text));
    std::vector<RepRelation> rels;
    for (std::size_t e = 0; e < b.graph->edges().size(); ++e) rels.push_back(random_relation(rng, 3));
    const auto xg = explode(b.graph, TableProblem(3, rels));
    try {
      expect_matches_bruteforce(*xg, b.graph->entry(), text);
    } catch (const PathBudgetExceeded&) {
      continue;
    }
  }
}

TEST(IfdsSolver, RespectsCallReturnMatching) {
  const std::string text = R"(
var a;
f();
a = 1;
f();
print(a);
function f() { print(2); }
)";
  const auto p = parse_shared(text);
  const auto b = build_supergraph(p);
  const auto xg = explode(b.graph, UninitProblem(*p));
  const IfdsResult r = solve_ifds(*xg, b.graph->entry());
  const NodeId use = b.graph->stmt_node(4);
  const FactId a = fact_of(0);
  EXPECT_FALSE(r.has(use, a));
  // Ignoring the matching lets the first call return after the second.
  EXPECT_TRUE(unbalanced_reach(*xg, b.graph->entry())[use].count(a));
  EXPECT_TRUE(r.reachable[use]);
  EXPECT_GT(r.summary_edges, 0u);
}

TEST(IfdsSolver, FixpointIsStableAndCountsAreConsistent) {
  const auto a = analyze_corpus("door");
  IfdsSolver s(*a.exploded);
  s.solve(a.graph().entry());
  EXPECT_EQ(s.reprocess_all(), 0u);
  const IfdsResult r = s.result();
  EXPECT_EQ(r.facts, a.ifds.facts);
  EXPECT_GE(r.steps, r.path_edges);
  EXPECT_GT(a.exploded->exploded_edge_count(), a.graph().edges().size());
}

TEST(BruteForce, BudgetIsEnforced) {
  const auto a = analyze_corpus("dirstat");
  const auto& xg = *a.exploded;
  EXPECT_THROW(mvp_bruteforce(
                   a.graph(), [&](EdgeId e) -> const RepRelation& { return xg.relation(e); },
                   a.graph().entry(), 40, 10),
               PathBudgetExceeded);
}
