#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace evflow {

/// A call that registers a handler. `event_arg` is -1 when the callee has no
/// event-name argument (callback-style APIs such as timers). With
/// `implicit_emit` the event fires on its own some time after registration.
struct RegistrationSpec {
  std::string callee;
  int event_arg = 0;
  int handler_arg = 1;
  bool implicit_emit = false;
};

struct EmissionSpec {
  std::string callee;
  int event_arg = 0;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message),
        key_(std::move(key)),
        message_(message) {}
  const std::string& key() const { return key_; }
  const std::string& message() const { return message_; }

 private:
  std::string key_;
  std::string message_;
};

/// Which callees are event primitives. The built-ins `register`, `emit` and
/// `register_async` are always present; a config file adds library wrappers.
class EventModel {
 public:
  static EventModel builtin();

  /// Parses a config document on top of the built-ins. Throws ConfigError
  /// naming the offending key.
  static EventModel from_json(const nlohmann::json& doc);
  static EventModel load(const std::filesystem::path& path);

  void add_registration(RegistrationSpec spec);
  void add_emission(EmissionSpec spec);

  const RegistrationSpec* find_registration(std::string_view callee) const;
  const EmissionSpec* find_emission(std::string_view callee) const;
  bool is_primitive(std::string_view callee) const {
    return find_registration(callee) || find_emission(callee);
  }

  const std::vector<RegistrationSpec>& registrations() const {
    return registrations_;
  }
  const std::vector<EmissionSpec>& emissions() const { return emissions_; }

  nlohmann::json to_json() const;

 private:
  std::vector<RegistrationSpec> registrations_;
  std::vector<EmissionSpec> emissions_;
};

}  // namespace evflow
