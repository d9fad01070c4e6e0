#include "evflow/report.hpp"

#include <set>
#include <sstream>

#include "evflow/uninit.hpp"

namespace evflow {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Ifds:
      return "ifds";
    case Mode::Ide:
      return "ide";
    case Mode::Diff:
      return "diff";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "ifds") return Mode::Ifds;
  if (s == "ide") return Mode::Ide;
  if (s == "diff") return Mode::Diff;
  return std::nullopt;
}

std::size_t Report::reported_count() const {
  std::size_t n = 0;
  for (const auto& d : diagnostics) n += d.filtered ? 0 : 1;
  return n;
}

namespace {

std::string filter_note(const HStateMap& m, const std::vector<std::string>& names) {
  std::string out;
  for (HandlerId h : m.infeasible_handlers()) {
    if (!out.empty()) out += "; ";
    out += "would require handler '" + names[h] + "' invoked before emission";
  }
  return out;
}

}  // namespace

Report build_report(const EventAwareAnalysis& a, Mode mode) {
  Report r;
  r.mode = mode;
  r.files = a.program->files;
  r.warnings = a.build.warnings;
  const Supergraph& g = a.graph();
  const auto& names = a.build.handler_names;

  const auto raw = report_uses(g, a.ifds.facts);
  std::set<std::pair<lang::StmtId, lang::VarId>> kept;
  for (const Diagnostic& d : report_uses(g, a.filtered.facts)) kept.insert({d.stmt, d.var});

  for (const Diagnostic& d : raw) {
    const bool survives = kept.count({d.stmt, d.var}) != 0;
    if (mode == Mode::Ide && !survives) continue;
    ReportDiagnostic rd{d.file, d.line, d.var_name, false, std::nullopt, ""};
    if (mode == Mode::Diff && !survives) {
      rd.filtered = true;
      auto it = a.filtered.provenance.find({d.node, fact_of(d.var)});
      if (it != a.filtered.provenance.end()) {
        std::vector<std::pair<std::string, std::string>> states;
        for (HandlerId h = 0; h < names.size(); ++h) {
          states.emplace_back(names[h], std::string(1, hstate_char(it->second.get(h))));
        }
        rd.handler_states = std::move(states);
        rd.note = filter_note(it->second, names);
      }
    }
    r.diagnostics.push_back(std::move(rd));
  }

  ReportStats& s = r.stats;
  s.nodes = g.nodes().size();
  s.edges = g.edges().size();
  s.facts = a.exploded->num_facts();
  s.handlers = a.build.handlers.size();
  s.exploded_edges = a.exploded->exploded_edge_count();
  s.ifds_steps = a.ifds.steps;
  s.ifds_path_edges = a.ifds.path_edges;
  s.ide_steps = a.ide.stats.steps;
  s.ide_jump_entries = a.ide.stats.jump_entries;
  return r;
}

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["version"] = r.version;
  j["files"] = r.files;
  j["mode"] = to_string(r.mode);
  j["diagnostics"] = nlohmann::ordered_json::array();
  for (const auto& d : r.diagnostics) {
    nlohmann::ordered_json e;
    e["file"] = d.file;
    e["line"] = d.line;
    e["var"] = d.var;
    e["status"] = d.filtered ? "filtered" : "reported";
    if (d.handler_states) {
      nlohmann::ordered_json hs = nlohmann::ordered_json::object();
      for (const auto& [h, st] : *d.handler_states) hs[h] = st;
      e["handler_states"] = hs;
    }
    if (!d.note.empty()) e["note"] = d.note;
    j["diagnostics"].push_back(e);
  }
  j["warnings"] = r.warnings;
  const ReportStats& s = r.stats;
  j["stats"] = {{"nodes", s.nodes},
                {"edges", s.edges},
                {"facts", s.facts},
                {"handlers", s.handlers},
                {"exploded_edges", s.exploded_edges},
                {"ifds_steps", s.ifds_steps},
                {"ifds_path_edges", s.ifds_path_edges},
                {"ide_steps", s.ide_steps},
                {"ide_jump_entries", s.ide_jump_entries},
                {"wall_ms", s.wall_ms}};
  return j;
}

Report report_from_json(const nlohmann::ordered_json& j) {
  Report r;
  r.version = j.at("version").get<int>();
  r.files = j.at("files").get<std::vector<std::string>>();
  const auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!mode) throw std::runtime_error("unknown mode in report");
  r.mode = *mode;
  for (const auto& e : j.at("diagnostics")) {
    ReportDiagnostic d;
    d.file = e.at("file").get<std::string>();
    d.line = e.at("line").get<std::uint32_t>();
    d.var = e.at("var").get<std::string>();
    d.filtered = e.at("status").get<std::string>() == "filtered";
    if (e.contains("handler_states")) {
      std::vector<std::pair<std::string, std::string>> states;
      for (const auto& [k, v] : e.at("handler_states").items()) {
        states.emplace_back(k, v.get<std::string>());
      }
      d.handler_states = std::move(states);
    }
    if (e.contains("note")) d.note = e.at("note").get<std::string>();
    r.diagnostics.push_back(std::move(d));
  }
  if (j.contains("warnings")) r.warnings = j.at("warnings").get<std::vector<std::string>>();
  const auto& s = j.at("stats");
  r.stats.nodes = s.at("nodes").get<std::size_t>();
  r.stats.edges = s.at("edges").get<std::size_t>();
  r.stats.facts = s.at("facts").get<std::size_t>();
  r.stats.handlers = s.at("handlers").get<std::size_t>();
  r.stats.exploded_edges = s.at("exploded_edges").get<std::size_t>();
  r.stats.ifds_steps = s.at("ifds_steps").get<std::size_t>();
  r.stats.ifds_path_edges = s.at("ifds_path_edges").get<std::size_t>();
  r.stats.ide_steps = s.at("ide_steps").get<std::size_t>();
  r.stats.ide_jump_entries = s.at("ide_jump_entries").get<std::size_t>();
  r.stats.wall_ms = s.at("wall_ms").get<double>();
  return r;
}

std::string render_text(const Report& r, bool color) {
  const char* red = color ? "\x1b[31m" : "";
  const char* dim = color ? "\x1b[2m" : "";
  const char* reset = color ? "\x1b[0m" : "";
  std::ostringstream os;
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  for (const auto& d : r.diagnostics) {
    os << (d.filtered ? dim : red) << d.file << ":" << d.line << ": variable '" << d.var
       << "' may be uninitialized";
    if (d.filtered) {
      os << " [infeasible-path artifact]";
      if (d.handler_states) {
        os << " {";
        for (std::size_t i = 0; i < d.handler_states->size(); ++i) {
          const auto& [h, st] = (*d.handler_states)[i];
          os << (i ? ", " : "") << h << ": " << st;
        }
        os << "}";
      }
    }
    os << reset << "\n";
    if (!d.note.empty()) os << "  filtered: " << d.note << "\n";
  }
  const std::size_t filtered = r.diagnostics.size() - r.reported_count();
  os << to_string(r.mode) << ": " << r.reported_count() << " diagnostic"
     << (r.reported_count() == 1 ? "" : "s");
  if (r.mode == Mode::Diff) os << ", " << filtered << " filtered";
  os << "\n";
  return os.str();
}

}  // namespace evflow
