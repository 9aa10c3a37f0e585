#include "runner.hpp"

#include <cmath>
#include <filesystem>
#include <set>

#include "bloch.hpp"
#include "boundstate.hpp"
#include "coupling.hpp"
#include "disorder.hpp"
#include "dynamics.hpp"
#include "floquet.hpp"
#include "io.hpp"

namespace essh {

namespace {
using nlohmann::json;

struct ConfigError : std::runtime_error {
  std::string key;
  ConfigError(std::string key_, const std::string& what)
      : std::runtime_error(what), key(std::move(key_)) {}
};

void check_keys(const json& config, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : config.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(key, "unknown config key: " + key);
    }
  }
}

void check_schema(const json& config) {
  if (!config.is_object()) {
    throw ConfigError("", "config must be a JSON object");
  }
  if (!config.contains("schema_version")) {
    throw ConfigError("schema_version", "schema_version is required");
  }
  if (!config["schema_version"].is_number_integer() ||
      config["schema_version"].get<int>() != 1) {
    throw ConfigError("schema_version", "schema_version must be 1");
  }
}

template <typename T>
T get(const json& config, const std::string& key, T fallback) {
  if (!config.contains(key)) return fallback;
  try {
    return config.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "bad value for key: " + key);
  }
}

template <typename T>
T require(const json& config, const std::string& key) {
  if (!config.contains(key)) {
    throw ConfigError(key, "missing required key: " + key);
  }
  try {
    return config.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "bad value for key: " + key);
  }
}

ModelParams model_from(const json& config) {
  ModelParams p;
  p.j1 = get(config, "j1", 1.0);
  p.j1p = get(config, "j1p", 1.0);
  p.j3 = get(config, "j3", 0.0);
  p.j3p = get(config, "j3p", 0.0);
  p.omega_delta = get(config, "omega_delta", 0.0);
  return p;
}

json model_json(const ModelParams& p) {
  return {{"j1", p.j1},
          {"j1p", p.j1p},
          {"j3", p.j3},
          {"j3p", p.j3p},
          {"omega_delta", p.omega_delta}};
}

json meta_for(const std::string& command, json config) {
  config.erase("threads");  // worker count never changes the results
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(config.dump())));
  return {{"command", command},
          {"config", config},
          {"config_hash", std::string(hash)},
          {"seed", get<std::uint64_t>(config, "seed", 0)},
          {"version", kVersion}};
}

const std::set<std::string> kModelKeys = {"j1", "j1p", "j3", "j3p",
                                          "omega_delta"};

std::set<std::string> with_model(std::set<std::string> extra) {
  extra.insert(kModelKeys.begin(), kModelKeys.end());
  extra.insert("schema_version");
  extra.insert("threads");  // accepted everywhere, stripped from metadata
  return extra;
}

EmitterSpec emitter_from(const json& config, int n_cells) {
  EmitterSpec em;
  em.delta = get(config, "delta", 0.0);
  if (config.contains("contacts")) {
    for (const auto& c : config.at("contacts")) {
      if (!c.is_array() || c.size() != 2) {
        throw ConfigError("contacts", "contacts must be [site, weight] pairs");
      }
      em.contacts.emplace_back(c[0].get<int>(), c[1].get<double>());
    }
  } else {
    const int site = get(config, "site", 2 * (n_cells / 2));
    em.contacts.emplace_back(site, get(config, "g", 0.1));
  }
  return em;
}

// ---- subcommands ----

RunOutcome run_bands(const json& config, const std::filesystem::path& out) {
  check_keys(config, with_model({"n_k", "seed"}));
  const int n_k = get(config, "n_k", 512);
  const ModelParams p = model_from(config);
  BandScan scan = band_scan(p, n_k);

  CsvDoc doc;
  doc.columns = {"k", "omega_lower", "omega_upper"};
  for (size_t i = 0; i < scan.k_grid.size(); ++i) {
    doc.rows.push_back({format_double(scan.k_grid[i]),
                        format_double(scan.omega_lower[i]),
                        format_double(scan.omega_upper[i])});
  }
  json meta = meta_for("bands", config);
  meta["gap_width"] = scan.gap_width;
  meta["band_min"] = scan.band_min;
  meta["band_max"] = scan.band_max;
  meta["vhs_energies"] = scan.vhs_energies;
  const auto path = out / "bands.csv";
  write_csv(path, meta, doc);

  RunOutcome r;
  r.summary = {{"gap_width", scan.gap_width},
               {"band_min", scan.band_min},
               {"band_max", scan.band_max},
               {"vhs_energies", scan.vhs_energies}};
  r.files = {path.string()};
  return r;
}

RunOutcome run_winding(const json& config, const std::filesystem::path& out) {
  check_keys(config, {"schema_version", "j3p", "j3", "grid", "seed",
                      "threads"});
  RunOutcome r;
  if (config.contains("grid")) {
    const json& grid = config.at("grid");
    check_keys(grid, {"min", "max", "step"});
    const double lo = require<double>(grid, "min");
    const double hi = require<double>(grid, "max");
    const double step = require<double>(grid, "step");
    if (step <= 0.0 || hi < lo) {
      throw ConfigError("grid", "grid needs min <= max and step > 0");
    }
    CsvDoc doc;
    doc.columns = {"j3p", "j3", "winding"};
    const int n = static_cast<int>(std::round((hi - lo) / step));
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        ModelParams p;
        p.j3p = lo + i * step;
        p.j3 = lo + j * step;
        std::string w = "nan";  // gapless lines carry no invariant
        if (!is_gapless(p)) w = std::to_string(winding_number(p));
        doc.rows.push_back(
            {format_double(p.j3p), format_double(p.j3), w});
      }
    }
    const auto path = out / "winding.csv";
    write_csv(path, meta_for("winding", config), doc);
    r.summary = {{"rows", doc.rows.size()}};
    r.files = {path.string()};
  } else {
    ModelParams p;
    p.j3p = require<double>(config, "j3p");
    p.j3 = require<double>(config, "j3");
    r.summary = {{"winding", winding_number(p)}};
  }
  return r;
}

RunOutcome run_selfenergy(const json& config,
                          const std::filesystem::path& out) {
  check_keys(config,
             with_model({"g", "eta", "delta_min", "delta_max", "n", "seed"}));
  const ModelParams p = model_from(config);
  const double g = get(config, "g", 0.1);
  const double eta = get(config, "eta", 1e-3);
  const double lo = get(config, "delta_min", -5.0);
  const double hi = get(config, "delta_max", 5.0);
  const int n = get(config, "n", 400);
  if (n < 2 || hi <= lo) {
    throw ConfigError("n", "selfenergy needs n >= 2 and delta_max > delta_min");
  }
  std::vector<double> deltas(n);
  for (int i = 0; i < n; ++i) deltas[i] = lo + (hi - lo) * i / (n - 1);
  SelfEnergyCurve curve = lamb_and_gamma(p, deltas, g, eta);

  CsvDoc doc;
  doc.columns = {"delta", "lamb_shift", "decay_rate"};
  for (int i = 0; i < n; ++i) {
    doc.rows.push_back({format_double(curve.delta[i]),
                        format_double(curve.lamb_shift[i]),
                        format_double(curve.decay_rate[i])});
  }
  const auto path = out / "selfenergy.csv";
  write_csv(path, meta_for("selfenergy", config), doc);
  RunOutcome r;
  r.summary = {{"rows", doc.rows.size()}};
  r.files = {path.string()};
  return r;
}

RunOutcome run_boundstate(const json& config,
                          const std::filesystem::path& out) {
  check_keys(config, with_model({"method", "g", "delta", "j_range", "n_cells",
                                 "site", "contacts", "seed"}));
  const ModelParams p = model_from(config);
  const std::string method = get<std::string>(config, "method", "residue");
  const double g = get(config, "g", 0.1);
  const int j_range = get(config, "j_range", 30);

  json meta = meta_for("boundstate", config);
  CsvDoc doc;
  RunOutcome r;
  const auto path = out / "boundstate.csv";
  if (method == "residue" || method == "quadrature") {
    BoundState bs;
    if (method == "residue") {
      auto [state, report] = wavefunction_residue(p, j_range, g);
      bs = state;
      meta["inside_count"] = report.inside_count;
      meta["winding_from_roots"] = report.winding_from_roots;
    } else {
      const double delta = get(config, "delta", 0.0);
      const double e_bs = solve_pole(p, delta, g, GapLabel::middle);
      bs = wavefunction_quadrature(p, e_bs, g, j_range);
    }
    doc.columns = {"j", "c_a", "c_b"};
    for (int j = bs.j_min; j <= bs.j_max; ++j) {
      doc.rows.push_back(
          {std::to_string(j), format_double(bs.a(j)), format_double(bs.b(j))});
    }
    meta["energy"] = bs.energy;
    meta["c_e"] = bs.c_e;
    r.summary = {{"energy", bs.energy}, {"c_e", bs.c_e}, {"method", method}};
  } else if (method == "numeric") {
    const int n_cells = get(config, "n_cells", 200);
    LatticeSpec ls;
    ls.n_cells = n_cells;
    ls.params = p;
    auto bath = build_hamiltonian(ls);
    auto em = emitter_from(config, n_cells);
    const double half_gap = band_scan(p).gap_width / 2.0;
    auto nbs = bound_state_numeric(compose(bath, {em}),
                                   -half_gap + 1e-9, half_gap - 1e-9);
    doc.columns = {"site", "amplitude"};
    for (int row = 0; row < bath.dim(); ++row) {
      doc.rows.push_back({std::to_string(bath.site_of_row[row]),
                          format_double(nbs.state(row))});
    }
    meta["energy"] = nbs.energy;
    meta["c_e"] = nbs.c_e;
    r.summary = {{"energy", nbs.energy}, {"c_e", nbs.c_e}, {"method", method}};
  } else {
    throw ConfigError("method",
                      "method must be residue, quadrature, or numeric");
  }
  meta["method"] = method;
  write_csv(path, meta, doc);
  r.files = {path.string()};
  return r;
}

RunOutcome run_disorder(const json& config, const std::filesystem::path& out) {
  check_keys(config, with_model({"n_cells", "g", "delta", "sigmas", "samples",
                                 "kind", "seed", "threads", "staggered"}));
  EnsembleSpec spec;
  spec.params = model_from(config);
  spec.n_cells = get(config, "n_cells", 600);
  spec.emitter = emitter_from(config, spec.n_cells);
  spec.sigmas = require<std::vector<double>>(config, "sigmas");
  spec.samples = get(config, "samples", 50);
  spec.master_seed = get<std::uint64_t>(config, "seed", 0);
  spec.n_threads = get(config, "threads", 1);
  const std::string kind = get<std::string>(config, "kind", "chiral");
  if (kind == "chiral") {
    spec.kind = DisorderKind::chiral_preserving;
  } else if (kind == "breaking") {
    spec.kind = DisorderKind::chiral_breaking;
  } else {
    throw ConfigError("kind", "kind must be chiral or breaking");
  }
  const double half_gap = band_scan(spec.params).gap_width / 2.0;
  spec.gap_lo = -half_gap + 1e-9;
  spec.gap_hi = half_gap - 1e-9;

  CsvDoc doc;
  doc.columns = {"model", "sigma", "count", "failures",
                 "mean_e", "std_e", "mean_ipr"};
  auto append = [&doc](const std::string& label, const EnsembleResult& res) {
    for (const auto& s : res.stats) {
      doc.rows.push_back({label, format_double(s.sigma),
                          std::to_string(s.count), std::to_string(s.failures),
                          format_double(s.mean_e), format_double(s.std_e),
                          format_double(s.mean_ipr)});
    }
  };
  append("topological", run_ensemble(spec));
  if (get(config, "staggered", false)) {
    EnsembleSpec stag = spec;
    stag.params = staggered_counterpart(spec.params);
    const double sg = band_scan(stag.params).gap_width / 2.0;
    stag.gap_lo = -sg + 1e-9;
    stag.gap_hi = sg - 1e-9;
    append("staggered", run_ensemble(stag));
  }
  const auto path = out / "disorder.csv";
  write_csv(path, meta_for("disorder", config), doc);
  RunOutcome r;
  r.summary = {{"rows", doc.rows.size()}};
  r.files = {path.string()};
  return r;
}

RunOutcome run_dynamics(const json& config, const std::filesystem::path& out) {
  check_keys(config, with_model({"n_cells", "g", "delta", "site", "contacts",
                                 "t_max", "dt", "seed"}));
  const ModelParams p = model_from(config);
  const int n_cells = get(config, "n_cells", 60);
  const double t_max = get(config, "t_max", 400.0);
  const double dt = get(config, "dt", 0.5);
  if (dt <= 0.0 || t_max <= 0.0) {
    throw ConfigError("dt", "dynamics needs dt > 0 and t_max > 0");
  }
  LatticeSpec ls;
  ls.n_cells = n_cells;
  ls.params = p;
  auto em = emitter_from(config, n_cells);
  std::vector<double> grid;
  for (double t = 0.0; t <= t_max + dt / 2; t += dt) grid.push_back(t);
  auto ts = evolve(compose(build_hamiltonian(ls), {em}), grid);

  CsvDoc doc;
  doc.columns = {"t", "re_c_e", "im_c_e", "population"};
  for (size_t i = 0; i < grid.size(); ++i) {
    doc.rows.push_back(
        {format_double(ts.times[i]), format_double(ts.c_e[i].real()),
         format_double(ts.c_e[i].imag()), format_double(ts.population[i])});
  }
  json meta = meta_for("dynamics", config);
  json peaks = json::array();
  for (const auto& pk : spectrum(ts)) {
    peaks.push_back({{"frequency", pk.frequency}, {"weight", pk.weight}});
  }
  meta["peaks"] = peaks;
  const auto path = out / "dynamics.csv";
  write_csv(path, meta, doc);
  RunOutcome r;
  r.summary = {{"rows", doc.rows.size()}, {"peaks", peaks}};
  r.files = {path.string()};
  return r;
}

RunOutcome run_floquet(const json& config, const std::filesystem::path& out) {
  check_keys(config, with_model({"delta", "delta1", "delta2", "ratio_aux",
                                 "simulate", "dt", "seed"}));
  FrequencyLadder ladder =
      make_ladder(require<double>(config, "delta"),
                  require<double>(config, "delta1"),
                  require<double>(config, "delta2"),
                  get(config, "ratio_aux", 20.0));
  ToneSchedule s = solve_tones(ladder, model_from(config));
  s.collisions = check_collisions(s, ladder);

  json docj;
  docj["meta"] = meta_for("floquet", config);
  docj["ladder"] = {{"delta", ladder.delta},     {"delta1", ladder.delta1},
                    {"delta2", ladder.delta2},   {"omega_bar", ladder.omega_bar},
                    {"omega_aux", ladder.omega_aux}};
  docj["omegas"] = s.omegas;
  docj["amps"] = s.amps;
  docj["amps_even"] = s.amps_even;
  docj["targets"] = model_json(s.targets);
  docj["table_deviation"] = tone_table_deviation(ladder);
  json cols = json::array();
  for (const auto& c : s.collisions) {
    cols.push_back({{"i", c.i},
                    {"j", c.j},
                    {"sign", c.sign},
                    {"matched", c.matched},
                    {"combo", c.combo},
                    {"target", c.target},
                    {"intended", c.intended}});
  }
  docj["collisions"] = cols;

  if (get(config, "simulate", false)) {
    auto res = simulate_cluster(ladder, s, get(config, "dt", -1.0));
    json hops = json::array(), devs = json::array();
    for (const auto& h : res.hoppings) {
      hops.push_back({{"alpha", h.alpha},
                      {"beta", h.beta},
                      {"target", h.target},
                      {"extracted", h.extracted}});
      devs.push_back(h.target != 0.0
                         ? h.extracted / std::abs(h.target) - 1.0
                         : 0.0);
    }
    docj["extracted_hoppings"] = hops;
    docj["deviations"] = devs;
    docj["hierarchy_ok"] = res.hierarchy_ok;
  }
  const auto path = out / "floquet.json";
  write_json(path, docj);
  RunOutcome r;
  r.summary = {{"omegas", s.omegas},
               {"collisions", cols.size()},
               {"table_deviation", docj["table_deviation"]}};
  r.files = {path.string()};
  return r;
}

}  // namespace

RunOutcome run_command(const std::string& command, const json& config,
                       const std::string& out_dir) {
  try {
    check_schema(config);
    const std::filesystem::path out(out_dir.empty() ? "." : out_dir);
    if (command == "bands") return run_bands(config, out);
    if (command == "winding") return run_winding(config, out);
    if (command == "selfenergy") return run_selfenergy(config, out);
    if (command == "boundstate") return run_boundstate(config, out);
    if (command == "disorder") return run_disorder(config, out);
    if (command == "dynamics") return run_dynamics(config, out);
    if (command == "floquet") return run_floquet(config, out);
    RunOutcome r;
    r.exit_code = 2;
    r.summary = {{"error",
                  {{"code", "bad_config"},
                   {"key", "command"},
                   {"message", "unknown command: " + command}}}};
    return r;
  } catch (const ConfigError& e) {
    RunOutcome r;
    r.exit_code = 2;
    r.summary = {{"error",
                  {{"code", "bad_config"},
                   {"key", e.key},
                   {"message", e.what()}}}};
    return r;
  } catch (const Error& e) {
    RunOutcome r;
    r.exit_code = 1;
    r.summary = {{"error",
                  {{"code", static_cast<int>(e.code())},
                   {"message", e.what()}}}};
    return r;
  } catch (const std::exception& e) {
    RunOutcome r;
    r.exit_code = 1;
    r.summary = {{"error", {{"code", -1}, {"message", e.what()}}}};
    return r;
  }
}

}  // namespace essh
