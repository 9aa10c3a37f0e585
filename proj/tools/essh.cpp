// Command-line front end for the extended-SSH simulator; every subcommand
// assembles a JSON config and hands it to the shared-library runner.
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "extssh/extssh.h"

namespace {
using nlohmann::json;

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "JSON config file");
  cmd->add_option("--out", common.out_dir, "output directory");
  cmd->add_option("--seed", common.seed, "master RNG seed");
  cmd->add_option("--threads", common.threads, "worker threads");
}

// flags override the config file; a missing file is a config error
int load_config(const Common& common, json& config, std::string& problem) {
  config = json{{"schema_version", 1}};
  if (!common.config_path.empty()) {
    std::ifstream f(common.config_path);
    if (!f) {
      problem = "cannot read config file: " + common.config_path;
      return 2;
    }
    config = json::parse(f, nullptr, false);
    if (config.is_discarded() || !config.is_object()) {
      problem = "config file is not a JSON object";
      return 2;
    }
    if (!config.contains("schema_version")) config["schema_version"] = 1;
  }
  if (common.seed) config["seed"] = *common.seed;
  if (common.threads) config["threads"] = *common.threads;
  return 0;
}

int run(const std::string& command, const json& config,
        const std::string& out_dir, bool print_summary = true) {
  char* summary = nullptr;
  const essh_status status =
      essh_run(command.c_str(), config.dump().c_str(), out_dir.c_str(),
               &summary);
  if (summary != nullptr) {
    if (print_summary || status != ESSH_OK) std::puts(summary);
    essh_string_free(summary);
  }
  if (status == ESSH_OK) return 0;
  return status == ESSH_ERR_CONFIG ? 2 : 1;
}

bool parse_grid(const std::string& text, json& grid, std::string& problem) {
  double lo = 0, hi = 0, step = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &extra) !=
      3) {
    problem = "grid must be min:max:step";
    return false;
  }
  grid = {{"min", lo}, {"max", hi}, {"step", step}};
  return true;
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extended-SSH lattice QED simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", essh_version());

  struct Sub {
    CLI::App* cmd;
    Common common;
    json flags = json::object();
  };
  std::vector<std::unique_ptr<Sub>> subs;
  auto add = [&](const std::string& name, const std::string& desc) -> Sub& {
    auto sub = std::make_unique<Sub>();
    sub->cmd = app.add_subcommand(name, desc);
    add_common(sub->cmd, sub->common);
    subs.push_back(std::move(sub));
    return *subs.back();
  };
  auto model_flags = [](Sub& s) {
    for (const char* key : {"j1", "j1p", "j3", "j3p", "omega_delta"}) {
      s.cmd->add_option_function<double>(
          std::string("--") + key,
          [&s, key](double v) { s.flags[key] = v; });
    }
  };

  Sub& bands = add("bands", "dispersion, gap, and critical energies");
  model_flags(bands);
  bands.cmd->add_option_function<int>(
      "--n-k", [&bands](int v) { bands.flags["n_k"] = v; });

  Sub& winding = add("winding", "winding number of a point or a grid");
  std::string grid_text;
  winding.cmd->add_option_function<double>(
      "--j3p", [&winding](double v) { winding.flags["j3p"] = v; });
  winding.cmd->add_option_function<double>(
      "--j3", [&winding](double v) { winding.flags["j3"] = v; });
  winding.cmd->add_option("--grid", grid_text, "phase-diagram grid min:max:step");

  Sub& sigma = add("selfenergy", "Lamb shift and decay rate vs detuning");
  model_flags(sigma);
  for (const char* key : {"g", "eta", "delta_min", "delta_max"}) {
    sigma.cmd->add_option_function<double>(
        std::string("--") + key,
        [&sigma, key](double v) { sigma.flags[key] = v; });
  }
  sigma.cmd->add_option_function<int>(
      "--n", [&sigma](int v) { sigma.flags["n"] = v; });

  Sub& bound = add("boundstate", "in-gap dressed-state profile");
  model_flags(bound);
  bound.cmd->add_option_function<std::string>(
      "--method", [&bound](std::string v) { bound.flags["method"] = v; });
  for (const char* key : {"g", "delta"}) {
    bound.cmd->add_option_function<double>(
        std::string("--") + key,
        [&bound, key](double v) { bound.flags[key] = v; });
  }
  for (const char* key : {"j-range", "n-cells", "site"}) {
    std::string jkey(key);
    for (auto& c : jkey) {
      if (c == '-') c = '_';
    }
    bound.cmd->add_option_function<int>(
        std::string("--") + key,
        [&bound, jkey](int v) { bound.flags[jkey] = v; });
  }

  Sub& disorder = add("disorder", "bound-state statistics under disorder");
  model_flags(disorder);
  for (const char* key : {"g", "delta"}) {
    disorder.cmd->add_option_function<double>(
        std::string("--") + key,
        [&disorder, key](double v) { disorder.flags[key] = v; });
  }
  disorder.cmd->add_option_function<std::vector<double>>(
      "--sigmas",
      [&disorder](std::vector<double> v) { disorder.flags["sigmas"] = v; });
  disorder.cmd->add_option_function<int>(
      "--samples", [&disorder](int v) { disorder.flags["samples"] = v; });
  disorder.cmd->add_option_function<int>(
      "--n-cells", [&disorder](int v) { disorder.flags["n_cells"] = v; });
  disorder.cmd->add_option_function<std::string>(
      "--kind", [&disorder](std::string v) { disorder.flags["kind"] = v; });
  disorder.cmd->add_flag_function(
      "--staggered",
      [&disorder](std::int64_t) { disorder.flags["staggered"] = true; });

  Sub& dynamics = add("dynamics", "exact emitter dynamics and spectrum");
  model_flags(dynamics);
  for (const char* key : {"g", "delta", "t_max", "dt"}) {
    dynamics.cmd->add_option_function<double>(
        std::string("--") + key,
        [&dynamics, key](double v) { dynamics.flags[key] = v; });
  }
  for (const char* key : {"n_cells", "site"}) {
    dynamics.cmd->add_option_function<int>(
        std::string("--") + key,
        [&dynamics, key](int v) { dynamics.flags[key] = v; });
  }

  Sub& floquet = add("floquet", "drive-tone schedule and collision report");
  model_flags(floquet);
  for (const char* key : {"delta", "delta1", "delta2", "ratio_aux", "dt"}) {
    floquet.cmd->add_option_function<double>(
        std::string("--") + key,
        [&floquet, key](double v) { floquet.flags[key] = v; });
  }
  floquet.cmd->add_flag_function(
      "--simulate",
      [&floquet](std::int64_t) { floquet.flags["simulate"] = true; });

  CLI11_PARSE(app, argc, argv);

  for (auto& sub : subs) {
    if (!sub->cmd->parsed()) continue;
    json config;
    std::string problem;
    if (load_config(sub->common, config, problem) != 0) {
      json err{{"error", {{"code", "bad_config"}, {"key", "config"},
                          {"message", problem}}}};
      std::puts(err.dump().c_str());
      return 2;
    }
    for (const auto& [key, value] : sub->flags.items()) config[key] = value;
    const std::string name = sub->cmd->get_name();
    if (name == "winding") {
      if (!grid_text.empty()) {
        json grid;
        if (!parse_grid(grid_text, grid, problem)) {
          json err{{"error", {{"code", "bad_config"}, {"key", "grid"},
                              {"message", problem}}}};
          std::puts(err.dump().c_str());
          return 2;
        }
        config["grid"] = grid;
      } else if (config.contains("j3p") && config.contains("j3") &&
                 !config.contains("grid")) {
        // plain `winding --j3p X --j3 Y` prints just the number
        char* summary = nullptr;
        const essh_status status = essh_run("winding", config.dump().c_str(),
                                            sub->common.out_dir.c_str(),
                                            &summary);
        int code = 1;
        if (status == ESSH_OK && summary != nullptr) {
          std::printf("%d\n", json::parse(summary)["winding"].get<int>());
          code = 0;
        } else {
          if (summary != nullptr) std::puts(summary);
          code = status == ESSH_ERR_CONFIG ? 2 : 1;
        }
        essh_string_free(summary);
        return code;
      }
    }
    return run(name, config, sub->common.out_dir);
  }
  return 1;
}
