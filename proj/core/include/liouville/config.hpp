#pragma once

#include <map>
#include <string>
#include <vector>

namespace liouville {

// Plain-text key-value run configuration:
//   command = spectrum2d
//   lambda = 3.14159
//   # comments and blank lines are ignored
// Unknown keys are rejected; every command has documented defaults.
struct RunConfig {
  std::string command;
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> strings;

  double get(const std::string& key, double fallback) const {
    auto it = numbers.find(key);
    return it == numbers.end() ? fallback : it->second;
  }
  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = strings.find(key);
    return it == strings.end() ? fallback : it->second;
  }
  bool has(const std::string& key) const {
    return numbers.count(key) || strings.count(key);
  }
};

// Parse configuration text; throws ConfigError naming the offending
// line/key. `command` may be preset (CLI subcommand); a config-file command
// must then agree.
RunConfig parse_config(const std::string& text,
                       const std::string& preset_command = "");

// serialize (sorted keys) so emit-then-parse round trips
std::string emit_config(const RunConfig& cfg);

// keys each command accepts (used for validation and --help text)
const std::map<std::string, std::vector<std::string>>& command_schema();

}  // namespace liouville
