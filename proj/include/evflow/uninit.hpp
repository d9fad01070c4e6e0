#pragma once

// Possibly-uninitialized variables as an IFDS problem. Facts are the
// program's variables (alpha-renamed, so a local and a global with the same
// name are distinct): fact d stands for VarId d - 1.

#include <string>
#include <vector>

#include "evflow/ifds.hpp"
#include "evflow/lang.hpp"
#include "evflow/supergraph.hpp"

namespace evflow {

inline FactId fact_of(lang::VarId v) { return static_cast<FactId>(v + 1); }
inline lang::VarId var_of(FactId d) { return static_cast<lang::VarId>(d - 1); }

class UninitProblem final : public IfdsProblem {
 public:
  explicit UninitProblem(const lang::Program& p) : p_(p) {}

  std::size_t num_facts() const override { return p_.vars.size(); }
  std::string fact_name(FactId d) const override;
  RepRelation flow(const Supergraph& g, EdgeId e) const override;

  /// Flow of a statement's own effect (assignments and declarations);
  /// identity for everything else.
  RepRelation flow_for(const lang::Stmt& s) const;

 private:
  RepRelation globals_only() const;
  RepRelation locals_of(lang::FuncId f) const;

  const lang::Program& p_;
};

/// Every variable a statement reads when it executes (conditions, printed
/// values, right-hand sides and call arguments).
std::vector<lang::VarId> stmt_reads(const lang::Stmt& s);

struct Diagnostic {
  NodeId node = 0;
  lang::StmtId stmt = 0;
  lang::VarId var = 0;
  std::string file;
  std::uint32_t line = 0;
  std::string var_name;
};

/// One diagnostic per (read site, variable) whose fact holds on entry to the
/// reading node. Ordered by statement id, then variable.
std::vector<Diagnostic> report_uses(const Supergraph& g,
                                    const std::vector<FactSet>& facts);

}  // namespace evflow
