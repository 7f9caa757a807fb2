#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "liouville/config.hpp"

namespace liouville {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunManifest {
  std::string command;
  RunConfig config;
  std::map<std::string, std::string> results;  // summary values
  std::vector<std::pair<std::string, std::string>> files;  // (name, sha256)
  double wallclock_s = 0.0;

  std::string to_text() const;
};

// Executes the pipeline for the configured command, writes data files and
// manifest.txt into out_dir, and returns the manifest.
RunManifest run(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace liouville
