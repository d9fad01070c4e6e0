// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evflow/event_lattice.hpp"
#include "evflow/oracle.hpp"
#include "evflow/program_gen.hpp"
#include "evflow/uninit.hpp"
#include "test_support.hpp"

using namespace evflow;
using namespace evflow::testing;

namespace {

struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void note(const std::string& n) { notes.push_back(n); }
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void expect_eq(const std::string& got, const std::string& want, const std::string& what) {
    if (got != want) failures.push_back(what + ": got " + got + ", want " + want);
  }
};

using Clock = std::chrono::steady_clock;

bool run_criterion(int id, const std::string& title, double budget_s,
                   const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    c.failures.push_back("took " + std::to_string(secs) + " s, budget " +
                         std::to_string(budget_s) + " s");
  }
  const bool ok = c.failures.empty();
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " ("
            << static_cast<long>(secs * 1000) << " ms)\n";
  for (const auto& n : c.notes) std::cout << "    " << n << "\n";
  for (const auto& f : c.failures) std::cout << "    " << f << "\n";
  return ok;
}

std::size_t count_var(const std::vector<Diagnostic>& ds, const std::string& var) {
  return static_cast<std::size_t>(std::count_if(
      ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.var_name == var; }));
}

// A fact reported by IFDS at `line` and filtered by the event-aware
// analysis with exactly `want` as its handler states.
void expect_filtered(Check& c, const EventAwareAnalysis& a, std::uint32_t line,
                     const std::string& var, const std::string& want) {
  const NodeId n = node_at_line(a, line);
  const FactId d = fact_named(*a.program, var);
  c.expect(a.ifds.has(n, d), var + " in IFDS result at line " + std::to_string(line));
  c.expect(!a.filtered.facts[n].count(d),
           var + " absent from filtered result at line " + std::to_string(line));
  c.expect(a.ide.has(n, d), var + " has an IDE value at line " + std::to_string(line));
  if (a.ide.has(n, d)) c.expect_eq(states(a, a.ide.at(n, d)), want, var + " handler states");
  auto it = a.filtered.provenance.find({n, d});
  c.expect(it != a.filtered.provenance.end(), var + " has provenance");
  if (it != a.filtered.provenance.end()) {
    c.expect_eq(states(a, it->second), want, var + " provenance");
  }
}

// ---- micro-function oracles, written independently of the library ---------

int code(char s) { return s == 'E' ? 0 : s == 'R' ? 1 : s == 'S' ? 2 : 3; }
char state_of(int c) { return "ERSX"[c]; }

// Table as strings indexed by X,S,R,E.
std::array<int, 4> table_of(const char* t) {
  // t lists images of X, S, R, E in that order; store by input code.
  std::array<int, 4> out{};
  const char order[4] = {'X', 'S', 'R', 'E'};
  for (int i = 0; i < 4; ++i) out[code(order[i])] = code(t[i]);
  return out;
}

std::array<int, 4> decode(std::uint8_t bits) {
  std::array<int, 4> out{};
  for (int s = 0; s < 4; ++s) out[s] = (bits >> (2 * s)) & 3;
  return out;
}

std::set<std::uint8_t> generated_closure() {
  std::set<std::uint8_t> fns = {MicroFn::identity().bits(), MicroFn::register_fn().bits(),
                                MicroFn::emit_fn().bits(), MicroFn::invoke_fn().bits()};
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<std::uint8_t> cur(fns.begin(), fns.end());
    for (auto f : cur) {
      for (auto g : cur) {
        auto a = decode(f), b = decode(g);
        std::uint8_t comp = 0, meet = 0;
        for (int s = 0; s < 4; ++s) {
          comp |= static_cast<std::uint8_t>(a[b[s]] << (2 * s));
          meet |= static_cast<std::uint8_t>(std::min(a[s], b[s]) << (2 * s));
        }
        grew |= fns.insert(comp).second;
        grew |= fns.insert(meet).second;
      }
    }
  }
  return fns;
}

// Longest strictly descending pointwise chain inside `fns`.
std::size_t chain_height(const std::set<std::uint8_t>& fns) {
  std::vector<std::uint8_t> v(fns.begin(), fns.end());
  auto below = [](std::uint8_t lo, std::uint8_t hi) {
    auto a = decode(lo), b = decode(hi);
    bool strict = false;
    for (int s = 0; s < 4; ++s) {
      if (a[s] > b[s]) return false;
      strict |= a[s] < b[s];
    }
    return strict;
  };
  std::map<std::uint8_t, std::size_t> depth;
  std::function<std::size_t(std::uint8_t)> longest = [&](std::uint8_t f) -> std::size_t {
    if (auto it = depth.find(f); it != depth.end()) return it->second;
    std::size_t best = 0;
    for (auto g : v) {
      if (below(g, f)) best = std::max(best, 1 + longest(g));
    }
    return depth[f] = best;
  };
  std::size_t h = 0;
  for (auto f : v) h = std::max(h, longest(f));
  return h;
}

std::vector<std::pair<std::string, EventAwareAnalysis>> corpus_and_random(std::size_t n,
                                                                          std::uint64_t seed) {
  std::vector<std::pair<std::string, EventAwareAnalysis>> out;
  for (const CorpusEntry& e : list_corpus(EVFLOW_CORPUS_DIR)) {
    const EventModel model = e.model.empty() ? EventModel::builtin() : EventModel::load(e.model);
    auto p = std::make_shared<const lang::Program>(
        lang::parse(read_text(e.source), model, e.source.filename().string()));
    out.emplace_back(e.source.filename().string(), analyze_event_aware(p, model));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string text = generate_program(seed + i);
    out.emplace_back(text, analyze(text));
  }
  return out;
}

}  // namespace

int main() {
  bool all = true;

  all &= run_criterion(1, "door case", 1.0, [](Check& c) {
    const auto a = analyze_corpus("door");
    const auto raw = report_uses(a.graph(), a.ifds.facts);
    c.expect(raw.size() == 1 && count_var(raw, "txt") == 1, "IFDS reports txt once");
    if (!raw.empty()) {
      c.expect(stmt_at_line(*a.program, raw[0].line).expr.has_value(),
               "diagnostic sits on the concatenation");
      c.expect(raw[0].line == 13, "diagnostic on line 13");
    }
    c.expect(report_uses(a.graph(), a.filtered.facts).empty(), "filtered reports nothing");
    const FactId txt = fact_named(*a.program, "txt");
    const NodeId open = start_of(a, "hdlOpen");
    c.expect(a.ide.has(open, txt), "txt reaches hdlOpen");
    if (a.ide.has(open, txt)) {
      c.expect_eq(states(a, a.ide.at(open, txt)), "{hdlOpen: E, hdlClose: S}",
                  "entering hdlOpen");
    }
    expect_filtered(c, a, 13, "txt", "{hdlOpen: E, hdlClose: X}");
  });

  all &= run_criterion(2, "dirstat analog", 1.0, [](Check& c) {
    const auto a = analyze_corpus("dirstat");
    c.expect(count_var(report_uses(a.graph(), a.ifds.facts), "sum") > 0, "IFDS reports sum");
    c.expect(count_var(report_uses(a.graph(), a.filtered.facts), "sum") == 0,
             "filtered does not report sum");
    const NodeId n = node_at_line(a, 17);
    c.expect(a.filtered.reachable[n], "the accumulation is reachable on a feasible path");
    if (a.ide.has(n, kZeroFact)) {
      c.expect_eq(states(a, a.ide.at(n, kZeroFact)), "{f: E, h: E}", "feasible path");
    } else {
      c.expect(false, "zero fact at the accumulation");
    }
    expect_filtered(c, a, 17, "sum", "{f: E, h: X}");
  });

  all &= run_criterion(3, "timer and server analogs", 1.0, [](Check& c) {
    const auto timer = analyze_corpus("timer");
    expect_filtered(c, timer, 12, "rem", "{start: E, tick: X}");
    c.expect(count_var(report_uses(timer.graph(), timer.filtered.facts), "rem") == 0,
             "rem filtered everywhere");
    const auto server = analyze_corpus("server");
    expect_filtered(c, server, 13, "nConn", "{lstn: E, conn: X}");
    c.expect(count_var(report_uses(server.graph(), server.filtered.facts), "nConn") == 0,
             "nConn filtered everywhere");
  });

  all &= run_criterion(4, "micro-function algebra", 1.0, [](Check& c) {
    // The published tables, column by column over inputs X, S, R, E.
    const auto reg = table_of("XRRE"), emit = table_of("XSEE"), inv = table_of("XXXE");
    c.expect(decode(MicroFn::register_fn().bits()) == reg, "register table");
    c.expect(decode(MicroFn::emit_fn().bits()) == emit, "emit table");
    c.expect(decode(MicroFn::invoke_fn().bits()) == inv, "invoke table");
    for (char s : std::string("XSRE")) {
      const HState hs = static_cast<HState>(code(s));
      c.expect(hstate_char(MicroFn::register_fn()(hs)) == state_of(reg[code(s)]), "register apply");
    }
    std::size_t bad_compose = 0, bad_meet = 0, enumerated = 0;
    for (unsigned f = 0; f < 256; ++f) {
      ++enumerated;
      const auto a = decode(static_cast<std::uint8_t>(f));
      for (unsigned g = 0; g < 256; ++g) {
        const auto b = decode(static_cast<std::uint8_t>(g));
        std::uint8_t comp = 0, meet = 0;
        for (int s = 0; s < 4; ++s) {
          comp |= static_cast<std::uint8_t>(a[b[s]] << (2 * s));
          meet |= static_cast<std::uint8_t>(std::min(a[s], b[s]) << (2 * s));
        }
        const MicroFn mf(static_cast<std::uint8_t>(f)), mg(static_cast<std::uint8_t>(g));
        bad_compose += mf_compose(mf, mg).bits() != comp;
        bad_meet += mf_meet(mf, mg).bits() != meet;
      }
    }
    c.expect(enumerated == 256, "256 functions");
    c.expect(bad_compose == 0, std::to_string(bad_compose) + " compose mismatches");
    c.expect(bad_meet == 0, std::to_string(bad_meet) + " meet mismatches");
    c.expect(verify_micro_tables() == 0, "tables agree with definitions");
    // Every generated function distributes over the chain meet.
    const auto closure = generated_closure();
    for (auto f : closure) {
      const auto t = decode(f);
      for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 4; ++y) {
          if (t[std::min(x, y)] != std::min(t[x], t[y])) {
            c.expect(false, "not distributive: " + to_string(MicroFn(f)));
          }
        }
      }
      // And composition distributes over function meet on both sides.
      for (unsigned g = 0; g < 256; ++g) {
        for (unsigned h = 0; h < 256; ++h) {
          const MicroFn F(f), G(static_cast<std::uint8_t>(g)), H(static_cast<std::uint8_t>(h));
          if (mf_compose(F, mf_meet(G, H)) != mf_meet(mf_compose(F, G), mf_compose(F, H))) {
            c.expect(false, "left distributivity " + to_string(F));
            g = h = 256;
          }
        }
      }
    }
  });

  const auto programs = corpus_and_random(100, 1);

  all &= run_criterion(5, "precision: filtered within IFDS", 0, [&](Check& c) {
    std::size_t strict = 0;
    for (const auto& [name, a] : programs) {
      for (const auto& v : check_precision(a)) c.expect(false, v + " in:\n" + name);
      for (NodeId n = 0; n < a.graph().nodes().size(); ++n) {
        strict += a.filtered.facts[n].size() < a.ifds.facts[n].size();
        if (a.ifds.facts[n].size() !=
            a.filtered.facts[n].size() +
                static_cast<std::size_t>(std::count_if(
                    a.filtered.provenance.begin(), a.filtered.provenance.end(),
                    [&](const auto& kv) { return kv.first.first == n && kv.first.second != kZeroFact; }))) {
          c.expect(false, "fact accounting at node " + a.graph().label(n) + " in:\n" + name);
        }
      }
    }
    c.expect(programs.size() >= 104, "corpus plus 100 random programs");
    c.expect(strict > 0, "filtering removes something somewhere");
    c.note(std::to_string(programs.size()) + " programs, " + std::to_string(strict) +
           " nodes where filtering is strictly smaller");
  });

  all &= run_criterion(6, "soundness against interpreter traces", 30.0, [&](Check& c) {
    std::size_t traces = 0, reads = 0;
    for (const auto& [name, a] : programs) {
      SoundnessStats st;
      for (const auto& v : check_soundness(a, 6, &st)) c.expect(false, v + " in:\n" + name);
      traces += st.traces;
      reads += st.uninit_reads;
    }
    c.expect(reads > 0, "some uninitialized reads observed");
    c.expect(traces > programs.size(), "schedule exploration branches");
    c.note(std::to_string(traces) + " traces, " + std::to_string(reads) + " uninitialized reads");
  });

  all &= run_criterion(7, "IFDS equals brute force; identity IDE equals IFDS", 0, [](Check& c) {
    std::size_t checked = 0, skipped = 0, paths = 0;
    for (std::uint64_t seed = 1; checked < 50 && seed < 1000; ++seed) {
      const std::string text = generate_program(seed, GenParams::small());
      const auto a = analyze(text);
      const ExplodedSupergraph& xg = *a.exploded;
      BruteForceResult bf;
      try {
        bf = mvp_bruteforce(
            a.graph(), [&](EdgeId e) -> const RepRelation& { return xg.relation(e); },
            a.graph().entry(), 40, 100000);
      } catch (const PathBudgetExceeded&) {
        ++skipped;
        continue;
      }
      ++checked;
      paths += bf.paths;
      for (NodeId n = 0; n < a.graph().nodes().size(); ++n) {
        if (bf.covered[n] != bool(a.ifds.reachable[n]) || bf.facts[n] != a.ifds.facts[n]) {
          c.expect(false, "brute force differs at " + a.graph().label(n) + " in:\n" + text);
          break;
        }
      }
      LabeledExplodedSupergraph plain(a.exploded, 0);
      const IdeResult ide = solve_ide(plain, a.graph().entry(), initial_environment());
      for (NodeId n = 0; n < a.graph().nodes().size(); ++n) {
        FactSet facts;
        for (const auto& [d, m] : ide.values[n]) {
          if (d != kZeroFact) facts.insert(d);
        }
        if (facts != a.ifds.facts[n] || ide.has(n, kZeroFact) != bool(a.ifds.reachable[n])) {
          c.expect(false, "identity IDE differs at " + a.graph().label(n) + " in:\n" + text);
          break;
        }
      }
    }
    c.expect(checked == 50, "50 programs enumerated (" + std::to_string(skipped) + " over budget)");
    c.note(std::to_string(checked) + " programs compared, " + std::to_string(paths) +
           " paths enumerated, " + std::to_string(skipped) + " over budget");
  });

  all &= run_criterion(8, "per-operation work bounded by handler count", 0, [&](Check& c) {
    const auto closure = generated_closure();
    const std::size_t height = chain_height(closure);
    std::size_t worst_work = 0, worst_updates = 0;
    for (const auto& [name, a] : programs) {
      const std::size_t H = a.build.handlers.size();
      const IdeStats& s = a.ide.stats;
      c.expect(s.max_op_work <= H, "op work " + std::to_string(s.max_op_work) + " > |H| in:\n" + name);
      for (EdgeId e = 0; e < a.graph().edges().size(); ++e) {
        c.expect(a.labeled->edge_label(e).size() <= H, "label wider than |H|");
      }
      worst_work = std::max(worst_work, s.max_op_work);
      worst_updates = std::max(worst_updates, s.max_entry_updates);
      c.expect(s.max_entry_updates <= 1 + H * height,
               "jump entry rewritten " + std::to_string(s.max_entry_updates) + " times in:\n" + name);
    }
    c.note(std::to_string(closure.size()) + " generated micro-functions, chain height " +
           std::to_string(height) + "; worst op work " + std::to_string(worst_work) +
           ", worst entry rewrites " + std::to_string(worst_updates));
  });

  std::cout << (all ? "ALL PASS" : "SOME FAILED") << "\n";
  return all ? 0 : 1;
}
