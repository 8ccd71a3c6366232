#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "plectic/runner.hpp"

using namespace plectic;

#ifndef SCENARIO_DIR
#define SCENARIO_DIR "."
#endif

namespace {

Json strip_wall(Json j) {
  if (j.is_object()) {
    j.erase("wall_ms");
    for (auto& [k, v] : j.items()) v = strip_wall(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_wall(v);
  }
  return j;
}

RunConfig tiny_config() {
  Json j;
  j["scenario"] = Json{{"name", "s2_x_torus"}};
  j["seed"] = 7;
  j["checks"] = Json::array({Json{{"name", "nondegeneracy"}}, Json{{"name", "split_verify"}}});
  return parse_config(j);
}

}  // namespace

TEST_CASE("config parsing and validation") {
  Json j;
  j["scenario"] = Json{{"name", "hopf_c2"}, {"params", Json{{"lambda", 0.5}}}};
  j["checks"] = Json::array({"nondegeneracy", Json{{"name", "moment"}, {"tol", 1e-7}}});
  RunConfig cfg = parse_config(j);
  CHECK(cfg.scenario_name == "hopf_c2");
  CHECK(cfg.params.lambda == 0.5);
  REQUIRE(cfg.checks.size() == 2);
  CHECK(cfg.checks[1].overrides.at("tol") == 1e-7);

  Json bad = j;
  bad["checks"].push_back("frobnicate");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);

  Json nochecks = j;
  nochecks["checks"] = Json::array();
  CHECK_THROWS_AS(parse_config(nochecks), ConfigError);

  Json negative = j;
  negative["checks"] = Json::array({Json{{"name", "moment"}, {"tol", -1.0}}});
  RunConfig cfg2 = parse_config(negative);
  CHECK_THROWS_AS(run_config(cfg2), ConfigError);
}

TEST_CASE("reports run, validate, and round-trip the schema") {
  RunConfig cfg = tiny_config();
  Json report = run_config(cfg);
  CHECK(report.at("schema_version") == 1);
  CHECK(report.at("scenario") == "s2_x_torus");
  CHECK(report.at("checks").size() == 2);
  CHECK(report_all_passed(report));
  std::string why;
  CHECK(validate_report(report, &why));
  // every shipped field type matches the schema expectations
  for (const auto& c : report.at("checks")) {
    CHECK(c.at("status") == "pass");
    CHECK(c.at("wall_ms").is_number());
  }
  // schema text parses as JSON
  Json schema = Json::parse(report_schema());
  CHECK(schema.at("properties").contains("all_passed"));
}

TEST_CASE("determinism: identical runs produce identical reports modulo timing") {
  RunConfig cfg = tiny_config();
  Json r1 = strip_wall(run_config(cfg));
  Json r2 = strip_wall(run_config(cfg));
  CHECK(r1.dump() == r2.dump());
  // parallel execution preserves report order and content
  RunConfig par = cfg;
  par.parallel = true;
  Json r3 = strip_wall(run_config(par));
  CHECK(r1.dump() == r3.dump());
}

TEST_CASE("tolerance scaling is recorded and applied") {
  RunConfig cfg = tiny_config();
  cfg.tol_scale = 10.0;
  Json report = run_config(cfg);
  CHECK(report.at("tol_scale") == 10.0);
  double tol = report.at("checks")[0].at("tolerance").get<double>();
  CHECK(tol == doctest::Approx(1e-7));  // default 1e-8 times 10
}

TEST_CASE("cli: run, exit codes, and outputs") {
  std::string cfg_path = "runner_test_cfg.json";
  std::string out_path = "runner_test_report.json";
  {
    std::ofstream out(cfg_path);
    out << R"({"scenario": {"name": "s2_x_torus"},
               "checks": [{"name": "nondegeneracy"}]})";
  }
  std::remove(out_path.c_str());
  {
    const char* args[] = {"plectic-cli", "run", cfg_path.c_str(), "--out", out_path.c_str()};
    CHECK(run_cli(5, args) == 0);
    std::ifstream in(out_path);
    REQUIRE(in.good());
    Json rep;
    in >> rep;
    CHECK(validate_report(rep));
  }
  // unknown check: exit 2 and no report
  {
    std::ofstream out(cfg_path);
    out << R"({"scenario": {"name": "s2_x_torus"}, "checks": ["frobnicate"]})";
  }
  std::remove(out_path.c_str());
  {
    const char* args[] = {"plectic-cli", "run", cfg_path.c_str(), "--out", out_path.c_str()};
    CHECK(run_cli(5, args) == 2);
    std::ifstream in(out_path);
    CHECK_FALSE(in.good());
  }
  // malformed json: exit 2
  {
    std::ofstream out(cfg_path);
    out << "{not json";
  }
  {
    const char* args[] = {"plectic-cli", "run", cfg_path.c_str()};
    CHECK(run_cli(3, args) == 2);
  }
  // missing file: exit 2
  {
    const char* args[] = {"plectic-cli", "run", "no_such_config.json"};
    CHECK(run_cli(3, args) == 2);
  }
  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
}

TEST_CASE("cli: failing checks exit 1") {
  std::string cfg_path = "runner_fail_cfg.json";
  {
    std::ofstream out(cfg_path);
    out << R"({"scenario": {"name": "hopf_c2", "params": {"corrupt_phi": true}},
               "checks": [{"name": "check_basic"}]})";
  }
  const char* args[] = {"plectic-cli", "run", cfg_path.c_str(), "--out", "runner_fail_out.json"};
  CHECK(run_cli(5, args) == 1);
  std::ifstream in("runner_fail_out.json");
  Json rep;
  in >> rep;
  CHECK_FALSE(report_all_passed(rep));
  CHECK(rep.at("checks")[0].at("data").at("violated_hypothesis") == "phi_not_closed");
  std::remove(cfg_path.c_str());
  std::remove("runner_fail_out.json");
}

TEST_CASE("shipped configs parse and name only known checks") {
  for (const char* name :
       {"s2_stationary_phase.json", "s2_x_torus.json", "hopf_c2.json",
        "product_spheres_single.json", "product_spheres_diagonal.json", "power_sigma_ell.json",
        "su2_cartan.json", "su2_cartan_adjoint.json", "multimomentum.json",
        "gaussian_lemmas.json", "negative_control_phi.json"}) {
    std::string path = std::string(SCENARIO_DIR) + "/" + name;
    CAPTURE(path);
    CHECK_NOTHROW(load_config_file(path));
  }
}

TEST_CASE("expression overrides use the canonical prefix syntax") {
  Json j;
  j["scenario"] = Json{{"name", "s2_x_torus"}};
  j["checks"] = Json::array({Json{{"name", "leaf_restrict"}, {"f", "(pow x1 2)"}}});
  Json report = run_config(parse_config(j));
  CHECK(report_all_passed(report));
  CHECK(report.at("checks")[0].at("data").at("f") == "(pow x1 2)");
  // the algebra header carries the row-major structure constants
  CHECK(report.at("algebra").at("dim") == 1);
  CHECK(report.at("algebra").at("structure_constants").size() == 1);
}

TEST_CASE("shipped schema file matches the embedded schema") {
  std::string path = std::string(SCENARIO_DIR) + "/../docs/report.schema.json";
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(Json::parse(text).dump() == Json::parse(report_schema()).dump());
}

TEST_CASE("scenario catalog listing is stable") {
  auto cat = scenario_catalog();
  auto cat2 = scenario_catalog();
  REQUIRE(cat.size() == cat2.size());
  for (std::size_t i = 0; i < cat.size(); ++i) {
    CHECK(cat[i].first == cat2[i].first);
    CHECK(cat[i].second == cat2[i].second);
  }
}
