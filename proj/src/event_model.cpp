#include "evflow/event_model.hpp"

#include <fstream>

namespace evflow {

EventModel EventModel::builtin() {
  EventModel m;
  m.registrations_.push_back({"register", 0, 1, false});
  m.registrations_.push_back({"register_async", -1, 0, true});
  m.emissions_.push_back({"emit", 0});
  return m;
}

void EventModel::add_registration(RegistrationSpec spec) {
  if (spec.callee.empty()) throw ConfigError("callee", "must be non-empty");
  if (spec.handler_arg < 0) {
    throw ConfigError("handler_arg", "must be a 0-based argument position");
  }
  if (spec.event_arg < -1) {
    throw ConfigError("event_arg", "must be -1 or a 0-based argument position");
  }
  if (spec.event_arg == spec.handler_arg) {
    throw ConfigError("event_arg", "event and handler share position " +
                                       std::to_string(spec.event_arg));
  }
  if (spec.event_arg < 0 && !spec.implicit_emit) {
    throw ConfigError("implicit_emit",
                      "registration '" + spec.callee +
                          "' without an event argument must emit implicitly");
  }
  if (is_primitive(spec.callee)) {
    throw ConfigError("callee", "'" + spec.callee + "' is already declared");
  }
  registrations_.push_back(std::move(spec));
}

void EventModel::add_emission(EmissionSpec spec) {
  if (spec.callee.empty()) throw ConfigError("callee", "must be non-empty");
  if (spec.event_arg < 0) {
    throw ConfigError("event_arg", "must be a 0-based argument position");
  }
  if (is_primitive(spec.callee)) {
    throw ConfigError("callee", "'" + spec.callee + "' is already declared");
  }
  emissions_.push_back(std::move(spec));
}

const RegistrationSpec* EventModel::find_registration(
    std::string_view callee) const {
  for (const auto& r : registrations_) {
    if (r.callee == callee) return &r;
  }
  return nullptr;
}

const EmissionSpec* EventModel::find_emission(std::string_view callee) const {
  for (const auto& e : emissions_) {
    if (e.callee == callee) return &e;
  }
  return nullptr;
}

namespace {

template <typename T>
T field(const nlohmann::json& obj, const char* name, const std::string& where) {
  if (!obj.contains(name)) throw ConfigError(where + "." + name, "missing");
  try {
    return obj.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + name, "has the wrong type");
  }
}

int position(const nlohmann::json& obj, const char* name,
             const std::string& where) {
  if (obj.contains(name) && obj.at(name).is_null()) return -1;
  return field<int>(obj, name, where);
}

}  // namespace

EventModel EventModel::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("<root>", "expected a JSON object");
  EventModel m = builtin();
  for (const auto& [key, value] : doc.items()) {
    if (key != "registrations" && key != "emissions") {
      throw ConfigError(key, "unknown key");
    }
    if (!value.is_array()) throw ConfigError(key, "expected an array");
  }
  if (doc.contains("registrations")) {
    const auto& regs = doc.at("registrations");
    for (std::size_t i = 0; i < regs.size(); ++i) {
      const std::string where = "registrations[" + std::to_string(i) + "]";
      const auto& r = regs[i];
      if (!r.is_object()) throw ConfigError(where, "expected an object");
      RegistrationSpec spec;
      spec.callee = field<std::string>(r, "callee", where);
      spec.event_arg = position(r, "event_arg", where);
      spec.handler_arg = field<int>(r, "handler_arg", where);
      spec.implicit_emit =
          r.contains("implicit_emit") ? field<bool>(r, "implicit_emit", where)
                                      : false;
      try {
        m.add_registration(std::move(spec));
      } catch (const ConfigError& e) {
        throw ConfigError(where + "." + e.key(), e.message());
      }
    }
  }
  if (doc.contains("emissions")) {
    const auto& ems = doc.at("emissions");
    for (std::size_t i = 0; i < ems.size(); ++i) {
      const std::string where = "emissions[" + std::to_string(i) + "]";
      const auto& e = ems[i];
      if (!e.is_object()) throw ConfigError(where, "expected an object");
      EmissionSpec spec;
      spec.callee = field<std::string>(e, "callee", where);
      spec.event_arg = field<int>(e, "event_arg", where);
      try {
        m.add_emission(std::move(spec));
      } catch (const ConfigError& err) {
        throw ConfigError(where + "." + err.key(), err.message());
      }
    }
  }
  return m;
}

EventModel EventModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open event model");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string(), e.what());
  }
  return from_json(doc);
}

nlohmann::json EventModel::to_json() const {
  nlohmann::json regs = nlohmann::json::array();
  for (const auto& r : registrations_) {
    regs.push_back({{"callee", r.callee},
                    {"event_arg", r.event_arg},
                    {"handler_arg", r.handler_arg},
                    {"implicit_emit", r.implicit_emit}});
  }
  nlohmann::json ems = nlohmann::json::array();
  for (const auto& e : emissions_) {
    ems.push_back({{"callee", e.callee}, {"event_arg", e.event_arg}});
  }
  return {{"registrations", regs}, {"emissions", ems}};
}

}  // namespace evflow
