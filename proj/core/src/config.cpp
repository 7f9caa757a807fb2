#include "liouville/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "liouville/errors.hpp"
#include "liouville/io.hpp"

namespace liouville {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

const std::vector<std::string> kCommands = {
    "spectrum2d", "bifurcate2d", "lambda2",   "radial3d", "pohozaev",
    "legendre-scan", "negindex4d", "extend", "norms", "validate"};

// string-valued keys (everything else must parse as a number)
const std::vector<std::string> kStringKeys = {"command", "input", "profile",
                                              "field", "schedule"};

}  // namespace

const std::map<std::string, std::vector<std::string>>& command_schema() {
  static const std::map<std::string, std::vector<std::string>> schema = {
      {"spectrum2d", {"lambda", "lambda_lo", "lambda_hi", "lambda_step", "X",
                      "nx", "ny", "n_eigs"}},
      {"bifurcate2d", {"lambda_lo", "lambda_hi", "lambda_step", "X", "nx", "ny",
                       "k", "n_steps", "ds"}},
      {"lambda2", {"lambda_star", "X", "nx", "ny"}},
      {"radial3d", {"R", "n", "grading", "eps_floor", "tol"}},
      {"pohozaev", {"profile", "epsilon", "R", "n", "grading", "tol"}},
      {"legendre-scan", {"mu_lo", "mu_hi", "step"}},
      {"negindex4d", {"R", "n", "grading", "eps_floor", "tol", "lambdas",
                      "kmax", "mu_cap"}},
      {"extend", {"field", "copies"}},
      {"norms", {"field", "profile", "alpha", "exponent"}},
      {"validate", {"h", "samples", "seed"}},
  };
  return schema;
}

RunConfig parse_config(const std::string& text,
                       const std::string& preset_command) {
  RunConfig cfg;
  cfg.command = preset_command;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::pair<std::string, std::string>> pairs;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");
    pairs.emplace_back(key, val);
  }

  for (const auto& [key, val] : pairs) {
    if (key == "command") {
      if (std::find(kCommands.begin(), kCommands.end(), val) == kCommands.end())
        throw ConfigError("unknown command '" + val + "'");
      if (!cfg.command.empty() && cfg.command != val)
        throw ConfigError("config command '" + val +
                          "' conflicts with CLI command '" + cfg.command + "'");
      cfg.command = val;
    }
  }
  if (cfg.command.empty())
    throw ConfigError("missing required key 'command'");

  const auto& schema = command_schema().at(cfg.command);
  for (const auto& [key, val] : pairs) {
    if (key == "command") continue;
    if (std::find(schema.begin(), schema.end(), key) == schema.end())
      throw ConfigError("unknown key '" + key + "' for command '" +
                        cfg.command + "'");
    const bool is_string =
        std::find(kStringKeys.begin(), kStringKeys.end(), key) !=
            kStringKeys.end() ||
        key == "lambdas";
    if (is_string) {
      cfg.strings[key] = val;
    } else {
      if (!looks_numeric(val))
        throw ConfigError("key '" + key + "': expected a number, got '" + val +
                          "'");
      cfg.numbers[key] = std::stod(val);
    }
  }

  // basic validation: tolerances and grid parameters must be positive
  for (const auto& [key, v] : cfg.numbers) {
    const bool must_be_positive =
        key == "tol" || key == "lambda" || key == "lambda_lo" ||
        key == "lambda_hi" || key == "lambda_step" || key == "X" ||
        key == "nx" || key == "ny" || key == "R" || key == "n" ||
        key == "step" || key == "ds" || key == "h" || key == "mu_lo" ||
        key == "mu_hi" || key == "eps_floor" || key == "copies" ||
        key == "grading" || key == "alpha" || key == "lambda_star" ||
        key == "kmax" || key == "n_steps" || key == "n_eigs" || key == "k" ||
        key == "mu_cap" || key == "samples";
    if (must_be_positive && !(v > 0.0))
      throw ConfigError("key '" + key + "': value must be > 0, got " +
                        io::format_g17(v));
  }
  return cfg;
}

std::string emit_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "command = " << cfg.command << "\n";
  for (const auto& [k, v] : cfg.numbers)
    out << k << " = " << io::format_g17(v) << "\n";
  for (const auto& [k, v] : cfg.strings)
    if (k != "command") out << k << " = " << v << "\n";
  return out.str();
}

}  // namespace liouville
