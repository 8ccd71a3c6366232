#ifndef PLECTIC_RUNNER_HPP
#define PLECTIC_RUNNER_HPP

#include <json.hpp>

#include "plectic/scenarios.hpp"

namespace plectic {

using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct CheckRequest {
  std::string name;
  Json overrides;  // per-check tolerances, grids, sample counts, t-grids
};

struct RunConfig {
  std::string scenario_name;
  ScenarioParams params;
  std::vector<CheckRequest> checks;
  std::string output;
  std::uint64_t seed = 20240801;
  double tol_scale = 1.0;
  bool parallel = false;
};

RunConfig parse_config(const Json& j);
RunConfig load_config_file(const std::string& path);

// Executes the checks in order and assembles the versioned report.
Json run_config(const RunConfig& cfg);

bool report_all_passed(const Json& report);

// The published report schema (also shipped at docs/report.schema.json).
std::string report_schema();

// Minimal structural validation of a report against the published schema.
bool validate_report(const Json& report, std::string* why = nullptr);

// CLI verbs: run <config> [--out path] [--tol-scale r] [--parallel] [--seed n],
// list-scenarios, schema.
int run_cli(int argc, const char* const* argv);

std::vector<std::string> known_checks();

}  // namespace plectic

#endif
