#include "extssh/extssh.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "bloch.hpp"
#include "boundstate.hpp"
#include "coupling.hpp"
#include "floquet.hpp"
#include "runner.hpp"

namespace {

thread_local std::string g_last_error;

essh_status map_code(essh::ErrorCode code) {
  using essh::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::size_too_small:
    case ErrorCode::not_normalized:
    case ErrorCode::invalid_site:
    case ErrorCode::grid_too_short:
    case ErrorCode::step_too_large:
      return ESSH_ERR_INVALID_ARGUMENT;
    case ErrorCode::gapless_model:
      return ESSH_ERR_GAPLESS;
    case ErrorCode::chirality_broken:
    case ErrorCode::root_on_unit_circle:
    case ErrorCode::sqrt_domain:
    case ErrorCode::non_positive_tone:
    case ErrorCode::energy_in_band:
      return ESSH_ERR_DOMAIN;
    case ErrorCode::no_pole_in_gap:
    case ErrorCode::no_ingap_state:
    case ErrorCode::no_edge_states:
    case ErrorCode::no_vhs:
      return ESSH_ERR_NOT_FOUND;
    case ErrorCode::bad_config:
      return ESSH_ERR_CONFIG;
    case ErrorCode::io_error:
      return ESSH_ERR_IO;
  }
  return ESSH_ERR_INTERNAL;
}

template <typename F>
essh_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return ESSH_OK;
  } catch (const essh::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ESSH_ERR_INTERNAL;
  }
}

essh::ModelParams to_params(const essh_model* m) {
  if (m == nullptr) {
    throw essh::Error(essh::ErrorCode::invalid_argument, "model is null");
  }
  return {m->j1, m->j1p, m->j3, m->j3p, m->omega_c, m->omega_delta};
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct essh_chain {
  essh::RealSpaceHamiltonian h;
  double half_gap;
};

extern "C" {

const char* essh_version(void) { return essh::kVersion; }

const char* essh_last_error(void) { return g_last_error.c_str(); }

essh_status essh_dispersion(const essh_model* m, double k, double* omega_out) {
  return guarded([&] {
    if (omega_out == nullptr) {
      throw essh::Error(essh::ErrorCode::invalid_argument, "null output");
    }
    *omega_out = essh::dispersion(to_params(m), k);
  });
}

essh_status essh_winding(const essh_model* m, int* w_out) {
  return guarded([&] {
    if (w_out == nullptr) {
      throw essh::Error(essh::ErrorCode::invalid_argument, "null output");
    }
    *w_out = essh::winding_number(to_params(m));
  });
}

essh_status essh_gap(const essh_model* m, double* gap_out) {
  return guarded([&] {
    if (gap_out == nullptr) {
      throw essh::Error(essh::ErrorCode::invalid_argument, "null output");
    }
    *gap_out = essh::band_scan(to_params(m)).gap_width;
  });
}

essh_status essh_vhs(const essh_model* m, double* out, int cap, int* n_out) {
  return guarded([&] {
    if (out == nullptr || n_out == nullptr || cap < 0) {
      throw essh::Error(essh::ErrorCode::invalid_argument, "bad output buffer");
    }
    const auto scan = essh::band_scan(to_params(m));
    *n_out = static_cast<int>(scan.vhs_energies.size());
    for (int i = 0; i < *n_out && i < cap; ++i) out[i] = scan.vhs_energies[i];
  });
}

essh_status essh_self_energy(const essh_model* m, double re_z, double im_z,
                             double g, double* re_out, double* im_out) {
  return guarded([&] {
    if (re_out == nullptr || im_out == nullptr) {
      throw essh::Error(essh::ErrorCode::invalid_argument, "null output");
    }
    const auto s = essh::self_energy(to_params(m), {re_z, im_z}, g);
    *re_out = s.real();
    *im_out = s.imag();
  });
}

essh_status essh_solve_pole(const essh_model* m, double delta, double g,
                            double* e_out) {
  return guarded([&] {
    if (e_out == nullptr) {
      throw essh::Error(essh::ErrorCode::invalid_argument, "null output");
    }
    *e_out = essh::solve_pole(to_params(m), delta, g, essh::GapLabel::middle);
  });
}

essh_status essh_chain_create(const essh_model* m, int n_cells,
                              essh_chain** chain_out) {
  return guarded([&] {
    if (chain_out == nullptr) {
      throw essh::Error(essh::ErrorCode::invalid_argument, "null output");
    }
    essh::LatticeSpec spec;
    spec.n_cells = n_cells;
    spec.params = to_params(m);
    auto* chain = new essh_chain;
    chain->h = essh::build_hamiltonian(spec);
    chain->half_gap = essh::band_scan(spec.params).gap_width / 2.0;
    *chain_out = chain;
  });
}

void essh_chain_destroy(essh_chain* chain) { delete chain; }

essh_status essh_chain_dim(const essh_chain* chain, int* dim_out) {
  return guarded([&] {
    if (chain == nullptr || dim_out == nullptr) {
      throw essh::Error(essh::ErrorCode::invalid_argument, "null argument");
    }
    *dim_out = chain->h.dim();
  });
}

essh_status essh_bound_state(const essh_chain* chain, double delta, int site,
                             double g, double* energy_out, double* c_e_out) {
  return guarded([&] {
    if (chain == nullptr || energy_out == nullptr || c_e_out == nullptr) {
      throw essh::Error(essh::ErrorCode::invalid_argument, "null argument");
    }
    auto full = essh::compose(chain->h,
                              {essh::EmitterSpec::local(delta, site, g)});
    auto bs = essh::bound_state_numeric(full, -chain->half_gap + 1e-9,
                                        chain->half_gap - 1e-9);
    *energy_out = bs.energy;
    *c_e_out = bs.c_e;
  });
}

essh_status essh_solve_tones(double delta, double delta1, double delta2,
                             const essh_model* targets, double omegas_out[6],
                             double amps_out[6]) {
  return guarded([&] {
    if (omegas_out == nullptr || amps_out == nullptr) {
      throw essh::Error(essh::ErrorCode::invalid_argument, "null output");
    }
    auto s = essh::solve_tones(essh::make_ladder(delta, delta1, delta2),
                               to_params(targets));
    for (int i = 0; i < 6; ++i) {
      omegas_out[i] = s.omegas[i];
      amps_out[i] = s.amps[i];
    }
  });
}

essh_status essh_run(const char* command, const char* config_json,
                     const char* out_dir, char** summary_out) {
  return guarded([&] {
    if (command == nullptr || config_json == nullptr) {
      throw essh::Error(essh::ErrorCode::invalid_argument,
                        "command and config must be non-null");
    }
    nlohmann::json config =
        nlohmann::json::parse(config_json, nullptr, false);
    essh::RunOutcome outcome;
    if (config.is_discarded()) {
      outcome.exit_code = 2;
      outcome.summary = {{"error",
                          {{"code", "bad_config"},
                           {"key", ""},
                           {"message", "config is not valid JSON"}}}};
    } else {
      outcome = essh::run_command(command, config,
                                  out_dir != nullptr ? out_dir : ".");
    }
    if (summary_out != nullptr) {
      *summary_out = dup_string(outcome.summary.dump());
    }
    if (outcome.exit_code == 2) {
      throw essh::Error(essh::ErrorCode::bad_config,
                        outcome.summary["error"]["message"].get<std::string>());
    }
    if (outcome.exit_code != 0) {
      throw essh::Error(essh::ErrorCode::invalid_argument,
                        outcome.summary["error"]["message"].get<std::string>());
    }
  });
}

void essh_string_free(char* s) { std::free(s); }

}  // extern "C"
