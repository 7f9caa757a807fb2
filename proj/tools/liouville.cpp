// liouville <command> --config <path> [--out <dir>]
//
// Exit codes: 0 success, 2 config/usage error, 3 numerical non-convergence,
// 4 I/O error. `validate` exits 3 when any oracle check fails.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "liouville/config.hpp"
#include "liouville/errors.hpp"
#include "liouville/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw liouville::IoError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for Liouville equations on strips"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string config_path;
  std::string out_dir = "out";

  std::vector<std::string> commands = {
      "spectrum2d", "bifurcate2d", "lambda2",   "radial3d", "pohozaev",
      "legendre-scan", "negindex4d", "extend", "norms", "validate"};
  std::vector<CLI::App*> subs;
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--out", out_dir, "output directory (default: out)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    std::string command;
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) command = commands[i];

    std::string text = config_path.empty() ? "" : read_file(config_path);
    liouville::RunConfig cfg = liouville::parse_config(text, command);
    liouville::RunManifest man = liouville::run(cfg, out_dir);

    for (const auto& [k, v] : man.results)
      std::cout << k << ": " << v << "\n";
    std::cout << "manifest: " << (out_dir + "/manifest.txt") << "\n";
    if (command == "validate" && man.results.at("fail_count") != "0") return 3;
    return 0;
  } catch (const liouville::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const liouville::SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const liouville::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 4;
  } catch (const liouville::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const liouville::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
