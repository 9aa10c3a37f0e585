#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "chain.hpp"
#include "types.hpp"

namespace essh {

// Detuning plus weighted contact list; a local coupling is one contact, a
// giant atom several.
struct EmitterSpec {
  double delta = 0.0;
  std::vector<std::pair<int, double>> contacts;  // (site, weight)

  static EmitterSpec local(double delta, int site, double g) {
    return {delta, {{site, g}}};
  }
};

// Single-excitation matrix of bath + emitters: emitter rows are appended
// after the bath block, in the order given.  site_of_row gets -1 for them.
RealSpaceHamiltonian compose(const RealSpaceHamiltonian& bath,
                             const std::vector<EmitterSpec>& emitters);

// Sigma_e(z) = (g^2/2pi) \int dk z/(z^2 - omega^2(k)), uniform trapezoid.
// Chiral models only (the 1/2 band-weight reduction requires omega_delta=0).
std::complex<double> self_energy(const ModelParams& p, std::complex<double> z,
                                 double g, int n_k = 1 << 16);

struct SelfEnergyCurve {
  std::vector<double> delta;
  std::vector<double> lamb_shift;  // Re Sigma(Delta + i eta)
  std::vector<double> decay_rate;  // -2 Im Sigma(Delta + i eta)
};

SelfEnergyCurve lamb_and_gamma(const ModelParams& p,
                               const std::vector<double>& delta_grid, double g,
                               double eta, int n_k = 1 << 16);

}  // namespace essh
