#include "evflow/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "evflow/interpreter.hpp"
#include "evflow/uninit.hpp"

namespace evflow {

namespace fs = std::filesystem;

std::vector<std::string> check_precision(const EventAwareAnalysis& a) {
  std::vector<std::string> out;
  const Supergraph& g = a.graph();
  for (NodeId n = 0; n < g.nodes().size(); ++n) {
    if (a.filtered.reachable[n] && !a.ifds.reachable[n]) {
      out.push_back("node " + g.label(n) + " reachable only after filtering");
    }
    for (FactId d : a.filtered.facts[n]) {
      if (!a.ifds.has(n, d)) {
        out.push_back("fact " + a.exploded->fact_name(d) + " at " + g.label(n) +
                      " is filtered-only");
      }
    }
  }
  return out;
}

std::vector<std::string> check_soundness(const EventAwareAnalysis& a,
                                         std::size_t max_decisions,
                                         SoundnessStats* stats) {
  std::vector<std::string> out;
  const Supergraph& g = a.graph();
  const lang::Program& p = *a.program;
  const auto traces = explore_schedules(p, max_decisions);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const ExecutionTrace& t = traces[i];
    if (stats) ++stats->traces;
    for (const TraceEvent* ev : t.uninit_reads()) {
      if (stats) ++stats->uninit_reads;
      const NodeId n = g.stmt_node(ev->stmt);
      if (n != kNoNode && a.filtered.facts[n].count(fact_of(ev->var))) continue;
      std::ostringstream os;
      os << "uninitialized read of " << p.qualified_name(ev->var) << " at "
         << (n == kNoNode ? "statement " + std::to_string(ev->stmt) : g.label(n))
         << " (schedule";
      for (std::size_t c : t.decisions_taken) os << ' ' << c;
      os << ") missing from the filtered result";
      out.push_back(os.str());
    }
  }
  return out;
}

std::vector<CorpusEntry> list_corpus(const fs::path& dir) {
  std::vector<CorpusEntry> out;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (de.path().extension() != ".evl") continue;
    CorpusEntry e{de.path(), {}};
    fs::path model = de.path();
    model.replace_extension(".model.json");
    if (fs::exists(model)) e.model = model;
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(),
            [](const CorpusEntry& x, const CorpusEntry& y) { return x.source < y.source; });
  return out;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void check_one(const std::string& name, const std::string& text,
               const EventModel& model, const OracleConfig& cfg,
               OracleSummary& sum, std::ostream* log) {
  auto program = std::make_shared<const lang::Program>(lang::parse(text, model, name));
  const EventAwareAnalysis a = analyze_event_aware(program, model);
  ++sum.programs;
  auto report = [&](const std::string& property, const std::vector<std::string>& found) {
    for (const std::string& d : found) {
      sum.violations.push_back({name, text, property, d});
      if (log) {
        *log << "VIOLATION " << property << " in " << name << ": " << d << "\n"
             << "--- counterexample ---\n"
             << text << "--- end ---\n";
      }
    }
  };
  report("precision", check_precision(a));
  SoundnessStats st;
  report("soundness", check_soundness(a, cfg.schedules, &st));
  sum.traces += st.traces;
  sum.uninit_reads += st.uninit_reads;
}

}  // namespace

OracleSummary run_oracle_suite(const OracleConfig& cfg, std::ostream* log) {
  OracleSummary sum;
  if (!cfg.corpus_dir.empty()) {
    if (!fs::is_directory(cfg.corpus_dir)) {
      throw std::runtime_error("corpus directory not found: " + cfg.corpus_dir.string());
    }
    for (const CorpusEntry& e : list_corpus(cfg.corpus_dir)) {
      const EventModel model = e.model.empty() ? EventModel::builtin() : EventModel::load(e.model);
      check_one(e.source.filename().string(), read_file(e.source), model, cfg, sum, log);
    }
  }
  for (std::size_t i = 0; i < cfg.random_programs; ++i) {
    const std::uint64_t seed = cfg.seed + i;
    check_one("random#" + std::to_string(seed), generate_program(seed, cfg.params),
              EventModel::builtin(), cfg, sum, log);
  }
  if (log) {
    *log << "oracle: " << sum.programs << " programs, " << sum.traces << " traces, "
         << sum.uninit_reads << " uninitialized reads, " << sum.violations.size()
         << " violations\n";
  }
  return sum;
}

}  // namespace evflow
