#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "runner.hpp"

using namespace essh;
using nlohmann::json;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string tmpdir(const std::string& tag) {
  auto d = std::filesystem::temp_directory_path() / ("essh_runner_" + tag);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d.string();
}
}  // namespace

TEST_CASE("config validation") {
  auto r = run_command("winding", json{{"j3p", 0.5}, {"j3", 0.8}}, ".");
  CHECK(r.exit_code == 2);  // schema_version missing
  CHECK(r.summary["error"]["key"] == "schema_version");

  r = run_command("winding",
                  json{{"schema_version", 1}, {"j3p", 0.5}, {"j3", 0.8},
                       {"bogus", 1}},
                  ".");
  CHECK(r.exit_code == 2);
  CHECK(r.summary["error"]["key"] == "bogus");

  r = run_command("nonsense", json{{"schema_version", 1}}, ".");
  CHECK(r.exit_code == 2);
  CHECK(r.summary["error"]["key"] == "command");

  r = run_command("winding",
                  json{{"schema_version", 1}, {"j3p", "x"}, {"j3", 0.8}}, ".");
  CHECK(r.exit_code == 2);
  CHECK(r.summary["error"]["key"] == "j3p");
}

TEST_CASE("winding: single point and grid") {
  auto r = run_command(
      "winding", json{{"schema_version", 1}, {"j3p", 0.5}, {"j3", 0.8}}, ".");
  REQUIRE(r.exit_code == 0);
  CHECK(r.summary["winding"] == 2);

  // gapless single point is a module error, not a config error
  r = run_command("winding",
                  json{{"schema_version", 1}, {"j3p", 0.0}, {"j3", 0.0}}, ".");
  CHECK(r.exit_code == 1);
  CHECK(r.summary.contains("error"));

  const auto dir = tmpdir("grid");
  r = run_command("winding",
                  json{{"schema_version", 1},
                       {"grid", {{"min", -1.0}, {"max", 1.0}, {"step", 1.0}}}},
                  dir);
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(dir + "/winding.csv");
  CHECK(csv.starts_with("# {"));
  CHECK(csv.find("j3p,j3,winding") != std::string::npos);
  CHECK(csv.find("nan") != std::string::npos);  // gapless (0, 0) point
  CHECK(r.summary["rows"] == 9);
}

TEST_CASE("bands writes gap and critical energies") {
  const auto dir = tmpdir("bands");
  auto r = run_command("bands",
                       json{{"schema_version", 1}, {"j3p", 0.5}, {"j3", 0.8}},
                       dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.summary["gap_width"].get<double>() ==
        doctest::Approx(0.212297).epsilon(1e-3));
  auto r2 = run_command("bands",
                        json{{"schema_version", 1}, {"j3", 2.0}, {"j3p", 4.0}},
                        dir);
  REQUIRE(r2.exit_code == 0);
  CHECK(r2.summary["vhs_energies"].size() == 2);
}

TEST_CASE("selfenergy curve has the requested length") {
  const auto dir = tmpdir("sigma");
  auto r = run_command("selfenergy",
                       json{{"schema_version", 1},
                            {"j3p", 0.5},
                            {"j3", 0.8},
                            {"n", 41},
                            {"delta_min", -2.0},
                            {"delta_max", 2.0}},
                       dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.summary["rows"] == 41);
  const std::string csv = slurp(dir + "/selfenergy.csv");
  CHECK(csv.find("delta,lamb_shift,decay_rate") != std::string::npos);
}

TEST_CASE("boundstate methods") {
  const auto dir = tmpdir("bs");
  auto r = run_command("boundstate",
                       json{{"schema_version", 1}, {"j3p", 0.5}, {"j3", 0.8},
                            {"method", "residue"}, {"j_range", 10}},
                       dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.summary["energy"].get<double>() == 0.0);

  r = run_command("boundstate",
                  json{{"schema_version", 1}, {"j3p", 0.5}, {"j3", 0.8},
                       {"method", "numeric"}, {"n_cells", 200}},
                  dir);
  REQUIRE(r.exit_code == 0);
  // mid-gap up to the finite-size splitting
  CHECK(std::abs(r.summary["energy"].get<double>()) < 1e-3);

  r = run_command("boundstate",
                  json{{"schema_version", 1}, {"method", "mystery"}}, dir);
  CHECK(r.exit_code == 2);
  CHECK(r.summary["error"]["key"] == "method");
}

TEST_CASE("dynamics writes a series plus its peak table") {
  const auto dir = tmpdir("dyn");
  auto r = run_command("dynamics",
                       json{{"schema_version", 1},
                            {"j3p", 2.0},
                            {"j3", 0.5},
                            {"n_cells", 10},
                            {"contacts", json::array({json::array({0, 0.1}),
                                                      json::array({1, 0.1})})},
                            {"t_max", 100.0},
                            {"dt", 0.5}},
                       dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.summary["rows"] == 201);
  CHECK(r.summary["peaks"].size() >= 2);
}

TEST_CASE("disorder output is identical across worker counts and reruns") {
  json base{{"schema_version", 1},   {"j3p", 0.5},    {"j3", 0.8},
            {"n_cells", 100},        {"g", 0.1},      {"samples", 10},
            {"sigmas", {0.02, 0.05}}, {"seed", 11},   {"staggered", true}};
  const auto d1 = tmpdir("dis1"), d8 = tmpdir("dis8"), d1b = tmpdir("dis1b");
  json c1 = base, c8 = base;
  c1["threads"] = 1;
  c8["threads"] = 8;
  REQUIRE(run_command("disorder", c1, d1).exit_code == 0);
  REQUIRE(run_command("disorder", c8, d8).exit_code == 0);
  REQUIRE(run_command("disorder", c1, d1b).exit_code == 0);
  const std::string b1 = slurp(d1 + "/disorder.csv");
  CHECK(b1 == slurp(d8 + "/disorder.csv"));
  CHECK(b1 == slurp(d1b + "/disorder.csv"));
  CHECK(b1.find("topological") != std::string::npos);
  CHECK(b1.find("staggered") != std::string::npos);
}

TEST_CASE("floquet schedule document") {
  const auto dir = tmpdir("floq");
  auto r = run_command("floquet",
                       json{{"schema_version", 1},
                            {"delta", 1.0},
                            {"delta1", 0.7},
                            {"delta2", 1.3},
                            {"j3p", 0.8},
                            {"j3", 0.5}},
                       dir);
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(slurp(dir + "/floquet.json"));
  CHECK(doc["omegas"][0].get<double>() == doctest::Approx(1.2));
  CHECK(doc["table_deviation"].get<double>() < 1e-12);
  CHECK(doc["collisions"].is_array());

  r = run_command("floquet",
                  json{{"schema_version", 1}, {"delta", 1.0},
                       {"delta1", 0.3}, {"delta2", 0.5}},
                  dir);
  CHECK(r.exit_code == 1);  // infeasible ladder: module error
}
