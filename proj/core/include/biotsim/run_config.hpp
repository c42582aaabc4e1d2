#pragma once

#include <span>
#include <string>
#include <vector>

namespace biotsim {

// One knob of the run configuration. Files are flat `key = value` ASCII
// with '#' comments; parsing is locale-independent (decimal point only).
struct ConfigKey {
  enum class Kind { Real, Int, Word, RealList };
  const char* name;
  Kind kind;
  const char* default_value;
  const char* doc;
};

// The full schema: every key has a documented default.
std::span<const ConfigKey> config_schema();

class RunConfig {
 public:
  static RunConfig defaults();
  static RunConfig from_file(const std::string& path);      // throws std::runtime_error
  static RunConfig from_string(const std::string& content); // for tests

  // Setters/getters validate the key against the schema and the value
  // against the declared kind; unknown keys are rejected.
  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;
  double get_real(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::vector<double> get_list(const std::string& key) const;

 private:
  std::vector<std::string> values_;  // parallel to config_schema()
};

// Help text enumerating every key, its default, and its meaning.
std::string config_help_text();

}  // namespace biotsim
