#include "evflow/uninit.hpp"

#include <algorithm>

namespace evflow {

using lang::Stmt;
using lang::VarId;

std::string UninitProblem::fact_name(FactId d) const {
  if (d == kZeroFact) return "0";
  return p_.qualified_name(var_of(d));
}

RepRelation UninitProblem::globals_only() const {
  std::vector<RepRelation::Pair> pairs;
  for (VarId v = 0; v < p_.vars.size(); ++v) {
    if (p_.vars[v].is_global()) pairs.emplace_back(fact_of(v), fact_of(v));
  }
  return RepRelation::from_pairs(std::move(pairs));
}

RepRelation UninitProblem::locals_of(lang::FuncId f) const {
  std::vector<RepRelation::Pair> pairs;
  for (VarId v = 0; v < p_.vars.size(); ++v) {
    if (!p_.vars[v].is_global() && p_.vars[v].owner == f) {
      pairs.emplace_back(fact_of(v), fact_of(v));
    }
  }
  return RepRelation::from_pairs(std::move(pairs));
}

RepRelation UninitProblem::flow_for(const Stmt& s) const {
  const std::size_t n = num_facts();
  switch (s.kind) {
    case Stmt::Kind::VarDecl:
    case Stmt::Kind::Assign: {
      const FactId x = fact_of(s.var);
      std::vector<RepRelation::Pair> pairs;
      for (FactId d = 1; d <= n; ++d) {
        if (d != x) pairs.emplace_back(d, d);
      }
      if (!s.expr) {
        pairs.emplace_back(kZeroFact, x);
      } else {
        for (VarId v : vars_read(*s.expr)) pairs.emplace_back(fact_of(v), x);
      }
      return RepRelation::from_pairs(std::move(pairs));
    }
    default:
      return RepRelation::identity(n);
  }
}

RepRelation UninitProblem::flow(const Supergraph& g, EdgeId id) const {
  const Edge& e = g.edge(id);
  const Node& src = g.node(e.from);
  switch (e.kind) {
    case EdgeKind::Intraproc: {
      if (src.kind == NodeKind::StartOf) {
        // Every non-parameter local starts out uninitialized; for top-level
        // code those are the globals.
        std::vector<RepRelation::Pair> pairs;
        const auto& fn = g.program().functions[src.func];
        for (FactId d = 1; d <= num_facts(); ++d) pairs.emplace_back(d, d);
        for (VarId v : fn.locals) {
          if (!p_.vars[v].is_param) pairs.emplace_back(kZeroFact, fact_of(v));
        }
        return RepRelation::from_pairs(std::move(pairs));
      }
      if (src.kind == NodeKind::Stmt) return flow_for(*src.stmt);
      return RepRelation::identity(num_facts());
    }
    case EdgeKind::Call: {
      if (e.to == g.event_loop()) return globals_only();
      std::vector<RepRelation::Pair> pairs = globals_only().pairs();
      const auto& callee = g.program().functions[e.target];
      const Stmt& call = *src.stmt;
      for (std::size_t i = 0; i < callee.param_vars.size(); ++i) {
        for (VarId v : vars_read(call.args[i])) {
          pairs.emplace_back(fact_of(v), fact_of(callee.param_vars[i]));
        }
      }
      return RepRelation::from_pairs(std::move(pairs));
    }
    case EdgeKind::Return:
    case EdgeKind::ToEventLoop:
    case EdgeKind::Dispatch:
      return globals_only();
    case EdgeKind::CallToReturn:
      return locals_of(src.func);
  }
  return RepRelation::identity(num_facts());
}

std::vector<VarId> stmt_reads(const Stmt& s) {
  std::vector<VarId> out;
  auto add = [&](const lang::Expr& e) {
    for (VarId v : vars_read(e)) {
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
  };
  if (s.expr) add(*s.expr);
  for (const auto& a : s.args) {
    if (a.kind != lang::Expr::Kind::FuncRef) add(a);
  }
  return out;
}

std::vector<Diagnostic> report_uses(const Supergraph& g,
                                    const std::vector<FactSet>& facts) {
  const lang::Program& p = g.program();
  std::vector<Diagnostic> out;
  lang::for_each_stmt(p, [&](const Stmt& s, lang::FuncId) {
    const NodeId n = g.stmt_node(s.id);
    std::vector<VarId> reads = stmt_reads(s);
    std::sort(reads.begin(), reads.end());
    for (VarId v : reads) {
      if (!facts[n].count(fact_of(v))) continue;
      Diagnostic d;
      d.node = n;
      d.stmt = s.id;
      d.var = v;
      d.file = p.files.empty() ? "<input>" : p.files[s.loc.file];
      d.line = s.loc.line;
      d.var_name = p.vars[v].name;
      out.push_back(std::move(d));
    }
  });
  std::sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.stmt, a.var) < std::tie(b.stmt, b.var);
  });
  return out;
}

}  // namespace evflow
