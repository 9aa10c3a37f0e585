#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace essh {

inline constexpr const char* kVersion = "0.1.0";

struct RunOutcome {
  int exit_code = 0;            // 0 ok, 1 module error, 2 config error
  nlohmann::json summary;       // results, or {"error": {...}}
  std::vector<std::string> files;
};

// Dispatch a subcommand (bands, winding, selfenergy, boundstate, disorder,
// dynamics, floquet) on a validated JSON config.  Configs require
// schema_version = 1 and reject unknown keys; every file written carries a
// `#`-prefixed metadata header with the config hash, seed, and version.
// Never throws: failures are reported through exit_code and summary.
RunOutcome run_command(const std::string& command,
                       const nlohmann::json& config,
                       const std::string& out_dir);

}  // namespace essh
