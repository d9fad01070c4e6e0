#include <gtest/gtest.h>

#include <random>
#include <set>

#include "evflow/interpreter.hpp"
#include "evflow/uninit.hpp"
#include "test_support.hpp"

using namespace evflow;
using namespace evflow::testing;

namespace {

// All subsets of {1..n}.
std::vector<FactSet> subsets(std::size_t n) {
  std::vector<FactSet> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    FactSet s;
    for (FactId d = 1; d <= n; ++d) {
      if (mask & (1u << (d - 1))) s.insert(d);
    }
    out.push_back(s);
  }
  return out;
}

// Declarations, assignments and prints over a handful of globals, no
// branches, so the analysis is exact.
std::string straight_line(std::mt19937& rng) {
  const char* names[] = {"a", "b", "c", "d"};
  std::string text;
  auto expr = [&] {
    std::string e = rng() % 3 == 0 ? std::to_string(rng() % 9) : names[rng() % 4];
    if (rng() % 2) e += std::string(rng() % 2 ? " + " : " * ") + names[rng() % 4];
    return e;
  };
  for (const char* n : names) {
    text += "var " + std::string(n) + (rng() % 2 ? " = " + std::to_string(rng() % 5) : "") + ";\n";
  }
  const int count = 3 + static_cast<int>(rng() % 8);
  for (int i = 0; i < count; ++i) {
    switch (rng() % 3) {
      case 0:
        text += "print(" + expr() + ");\n";
        break;
      default:
        text += std::string(names[rng() % 4]) + " = " + expr() + ";\n";
        break;
    }
  }
  return text;
}

}  // namespace

TEST(UninitFlow, AssignmentFromTwoVariables) {
  const auto p = parse_shared("var x;\nvar y;\nvar z;\nx = y + z;\n");
  const UninitProblem prob(*p);
  const FactId x = fact_named(*p, "x"), y = fact_named(*p, "y"), z = fact_named(*p, "z");
  const RepRelation r = prob.flow_for(stmt_at_line(*p, 4));
  EXPECT_EQ(r, RepRelation::from_pairs({{y, x}, {y, y}, {z, x}, {z, z}}));
  EXPECT_EQ(apply_rel(r, {y}), (FactSet{x, y}));
  EXPECT_EQ(apply_rel(r, {x}), FactSet{});
  EXPECT_EQ(apply_rel(r, {}), FactSet{});
}

TEST(UninitFlow, DeclarationGensAndConstantKills) {
  const auto p = parse_shared("var x;\nx = 1;\nprint(x);\n");
  const UninitProblem prob(*p);
  const FactId x = fact_named(*p, "x");
  EXPECT_EQ(prob.flow_for(stmt_at_line(*p, 1)), RepRelation::from_pairs({{0, x}}));
  EXPECT_EQ(prob.flow_for(stmt_at_line(*p, 2)), RepRelation());
  EXPECT_EQ(prob.flow_for(stmt_at_line(*p, 3)), RepRelation::identity(1));
  EXPECT_EQ(prob.fact_name(x), "x");
  EXPECT_EQ(prob.fact_name(kZeroFact), "0");
}

TEST(UninitFlow, EveryEdgeFunctionIsDistributive) {
  // Three variables; check f(A u B) = f(A) u f(B) over all pairs of subsets
  // for every edge of a program that exercises each edge kind.
  const auto p = parse_shared(R"(
var a;
var b = a;
register("e", h);
emit("e");
f(b);
function f(c) { a = c * 2; }
function h() { print(a); }
)");
  ASSERT_EQ(p->vars.size(), 3u);
  const auto build = build_supergraph(p);
  const UninitProblem prob(*p);
  const auto all = subsets(prob.num_facts());
  for (const Edge& e : build.graph->edges()) {
    const RepRelation r = prob.flow(*build.graph, e.id);
    for (const auto& s1 : all) {
      for (const auto& s2 : all) {
        FactSet both = s1;
        both.insert(s2.begin(), s2.end());
        FactSet sep = apply_rel(r, s1);
        const FactSet r2 = apply_rel(r, s2);
        sep.insert(r2.begin(), r2.end());
        ASSERT_EQ(apply_rel(r, both), sep) << build.graph->label(e.from);
      }
    }
  }
}

TEST(UninitFlow, ParametersBindFromArguments) {
  const auto p = parse_shared("var u;\nvar k = 1;\nf(u, k);\nfunction f(a, b) { print(a + b); }\n");
  const auto b = build_supergraph(p);
  const UninitProblem prob(*p);
  const FactId u = fact_named(*p, "u"), k = fact_named(*p, "k"), pa = fact_named(*p, "f::a"),
               pb = fact_named(*p, "f::b");
  for (const Edge& e : b.graph->edges()) {
    if (e.kind != EdgeKind::Call || e.to == b.graph->event_loop()) continue;
    const RepRelation r = prob.flow(*b.graph, e.id);
    EXPECT_TRUE(r.contains(u, pa));
    EXPECT_TRUE(r.contains(k, pb));
    EXPECT_FALSE(r.contains(k, pa));
  }
  const auto a = analyze("var u;\nvar k = 1;\nf(u, k);\nfunction f(a, b) { print(a + b); }\n");
  const auto diags = report_uses(a.graph(), a.ifds.facts);
  // The call reads u, and the callee reads the parameter bound to it.
  ASSERT_EQ(diags.size(), 2u);
  EXPECT_EQ(diags[0].var_name, "u");
  EXPECT_EQ(diags[0].line, 3u);
  EXPECT_EQ(diags[1].var_name, "a");
  EXPECT_EQ(diags[1].line, 4u);
}

TEST(ReportUses, OnePerReadSiteAndVariable) {
  const auto a = analyze("var x;\nprint(x);\nprint(x + x);\n");
  const auto d = report_uses(a.graph(), a.ifds.facts);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].line, 2u);
  EXPECT_EQ(d[1].line, 3u);
  EXPECT_EQ(d[0].file, "test.evl");
  EXPECT_EQ(d[0].var_name, "x");
}

TEST(ReportUses, DoorBeforeAndAfterFiltering) {
  const auto a = analyze_corpus("door");
  const auto before = report_uses(a.graph(), a.ifds.facts);
  ASSERT_EQ(before.size(), 1u);
  EXPECT_EQ(before[0].var_name, "txt");
  EXPECT_EQ(before[0].line, 13u);
  EXPECT_EQ(before[0].file, "door.evl");
  EXPECT_TRUE(report_uses(a.graph(), a.filtered.facts).empty());
}

TEST(ReportUses, StmtReadsSkipsHandlerReferences) {
  const auto p = parse_shared("var x = 1;\nregister(\"e\", h);\nprint(x + x);\nfunction h() {}\n");
  EXPECT_TRUE(stmt_reads(stmt_at_line(*p, 2)).empty());
  EXPECT_EQ(stmt_reads(stmt_at_line(*p, 3)), std::vector<lang::VarId>{0});
}

TEST(UninitAnalysis, StraightLineMatchesInterpreterExactly) {
  std::mt19937 rng(31);
  for (int iter = 0; iter < 300; ++iter) {
    const std::string text = straight_line(rng);
    const auto a = analyze(text);
    const auto t = interpret(*a.program);
    ASSERT_FALSE(t.truncated || t.runtime_error) << text;
    std::set<std::pair<lang::StmtId, lang::VarId>> dynamic, stat;
    for (const TraceEvent* e : t.uninit_reads()) dynamic.emplace(e->stmt, e->var);
    for (const Diagnostic& d : report_uses(a.graph(), a.ifds.facts)) stat.emplace(d.stmt, d.var);
    ASSERT_EQ(dynamic, stat) << text;
  }
}
