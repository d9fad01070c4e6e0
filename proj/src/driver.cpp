#include "evflow/driver.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "evflow/oracle.hpp"

namespace evflow {

namespace fs = std::filesystem;

bool color_enabled() { return std::getenv("EVFLOW_NO_COLOR") == nullptr; }

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_to(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

RunResult run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  RunResult res;
  res.exit_code = kExitError;
  if (cfg.inputs.empty()) {
    err << "error: no input files\n";
    return res;
  }
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const EventModel model =
        cfg.event_model.empty() ? EventModel::builtin() : EventModel::load(cfg.event_model);
    std::vector<lang::SourceFile> files;
    for (const auto& p : cfg.inputs) files.push_back({p.string(), read_file(p)});
    auto program = std::make_shared<const lang::Program>(lang::parse_files(files, model));
    const EventAwareAnalysis a = analyze_event_aware(program, model);

    if (!cfg.dump_supergraph.empty()) {
      std::ostringstream os;
      DotOptions opts;
      opts.annotations = &a.build.annotations;
      opts.handler_names = &a.build.handler_names;
      write_dot(os, a.graph(), opts);
      write_to(cfg.dump_supergraph, os.str());
    }
    if (!cfg.dump_exploded.empty()) {
      std::ostringstream os;
      write_exploded_dot(os, *a.exploded, &a.ifds);
      write_to(cfg.dump_exploded, os.str());
    }

    Report r = build_report(a, cfg.mode);
    r.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (cfg.format == Format::Json) {
      out << to_json(r).dump(2) << "\n";
    } else {
      out << render_text(r, color_enabled());
    }
    res.exit_code = r.reported_count() ? kExitDiagnostics : kExitClean;
    res.report = std::move(r);
  } catch (const lang::ParseError& e) {
    err << e.what() << "\n";
  } catch (const ConfigError& e) {
    err << "event model " << cfg.event_model.string() << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return res;
}

int run_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OracleConfig oc;
  oc.corpus_dir = cfg.corpus_dir;
  oc.seed = cfg.seed;
  oc.schedules = cfg.schedules;
  oc.random_programs = cfg.random_programs;
  try {
    const OracleSummary s = run_oracle_suite(oc, &out);
    out << (s.passed() ? "PASS" : "FAIL") << "\n";
    return s.passed() ? kExitClean : kExitDiagnostics;
  } catch (const ConfigError& e) {
    err << "event model: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace evflow
