#include <CLI11.hpp>

#include "plectic/runner.hpp"

// Thin wrapper: subcommand parsing via CLI11, all behavior in the library so
// tests can drive it directly.
int main(int argc, char** argv) {
  CLI::App app{"multisymplectic scenario runner"};
  app.require_subcommand(0, 1);

  std::string config_path, out_path;
  double tol_scale = 1.0;
  std::uint64_t seed = 0;
  bool parallel = false, have_seed = false;

  auto* run = app.add_subcommand("run", "execute a scenario config and emit a JSON report");
  run->add_option("config", config_path, "path to the scenario config")->required();
  run->add_option("--out", out_path, "report output path (stdout when omitted)");
  run->add_option("--tol-scale", tol_scale, "multiply every tolerance by this factor");
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  run->add_flag("--parallel", parallel, "run checks concurrently");

  auto* ls = app.add_subcommand("list-scenarios", "print the scenario catalog");
  auto* sc = app.add_subcommand("schema", "print the report JSON schema");

  CLI11_PARSE(app, argc, argv);
  have_seed = seed_opt->count() > 0;

  if (ls->parsed()) {
    const char* args[] = {"plectic-cli", "list-scenarios"};
    return plectic::run_cli(2, args);
  }
  if (sc->parsed()) {
    const char* args[] = {"plectic-cli", "schema"};
    return plectic::run_cli(2, args);
  }
  if (run->parsed()) {
    std::vector<std::string> args{"plectic-cli", "run", config_path};
    if (!out_path.empty()) {
      args.push_back("--out");
      args.push_back(out_path);
    }
    if (tol_scale != 1.0) {
      args.push_back("--tol-scale");
      args.push_back(std::to_string(tol_scale));
    }
    if (have_seed) {
      args.push_back("--seed");
      args.push_back(std::to_string(seed));
    }
    if (parallel) args.push_back("--parallel");
    std::vector<const char*> argp;
    for (const auto& a : args) argp.push_back(a.c_str());
    return plectic::run_cli(static_cast<int>(argp.size()), argp.data());
  }
  std::cout << app.help();
  return 2;
}
