#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace essh {

enum class ErrorCode {
  invalid_argument,
  gapless_model,
  chirality_broken,
  invalid_site,
  size_too_small,
  not_normalized,
  no_pole_in_gap,
  energy_in_band,
  root_on_unit_circle,
  no_ingap_state,
  no_edge_states,
  grid_too_short,
  no_vhs,
  non_positive_tone,
  sqrt_domain,
  step_too_large,
  bad_config,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Bath parameters in units of the common nearest-neighbour hopping J.
// omega_c is a bookkeeping reference only: every internal energy is measured
// relative to it, so it never enters a matrix element.
struct ModelParams {
  double j1 = 1.0;
  double j1p = 1.0;
  double j3 = 0.0;
  double j3p = 0.0;
  double omega_c = 0.0;
  double omega_delta = 0.0;

  bool chiral() const { return omega_delta == 0.0; }

  double hopping_scale() const {
    return std::max({std::abs(j1), std::abs(j1p), std::abs(j3), std::abs(j3p)});
  }

  // A<->B sublattice swap: J1<->J1', J3<->J3', omega_delta -> -omega_delta.
  ModelParams swapped() const {
    return {j1p, j1, j3p, j3, omega_c, -omega_delta};
  }
};

}  // namespace essh
