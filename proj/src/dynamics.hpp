#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "chain.hpp"
#include "coupling.hpp"

namespace essh {

struct TimeSeries {
  std::vector<double> times;                // units of 1/J
  std::vector<std::complex<double>> c_e;    // emitter amplitude
  std::vector<double> population;           // |c_e|^2
};

// Exact spectral propagation C(t) = V exp(-i Lambda t) V^T C(0); records the
// emitter amplitude on each time of the ascending grid.  The default initial
// state is the (first) emitter excited.
TimeSeries evolve(const RealSpaceHamiltonian& h_full,
                  const std::vector<double>& t_grid,
                  const Eigen::VectorXcd* initial = nullptr);

// Full state at a single time (norm/reversibility checks).
Eigen::VectorXcd evolve_state(const RealSpaceHamiltonian& h_full,
                              const Eigen::VectorXcd& initial, double t);

struct SpectralPeak {
  double frequency;  // angular frequency of the e^{-i w t} component
  double weight;     // interpolated magnitude, normalized by sample count
};

// DFT of c_e(t) over a uniform grid: flat window, x8 zero padding, peaks are
// local maxima above `rel_threshold` of the global maximum, refined by
// parabolic interpolation of the log magnitude.
std::vector<SpectralPeak> spectrum(const TimeSeries& ts,
                                   double rel_threshold = 0.05);

// Emitter + edge-state subspace of the clean open chain.
struct EffectiveModel {
  double delta = 0.0;
  std::vector<double> edge_energies;  // eps_i
  std::vector<double> couplings;      // g~_i = <ES_i|H_int|e>
  double g_combined = 0.0;            // sqrt(sum g~_i^2)
};

// gap_window < 0 selects half the clean band gap automatically.
EffectiveModel effective_model(const RealSpaceHamiltonian& bath,
                               const EmitterSpec& emitter,
                               double gap_window = -1.0);

// Exact evolution of the (1 + n_edge)-level effective Hamiltonian.
TimeSeries effective_evolve(const EffectiveModel& m,
                            const std::vector<double>& t_grid);

// Closed-form |C_e(t)|^2 for an emitter weakly coupled (g_eff) to a single
// edge doublet split by eps.
double weak_oscillation_population(double eps, double g_eff, double t);

struct DecayFit {
  double x_star = 0.0;       // in-band critical energy used as Delta
  double gamma_markov = 0.0; // -2 Im Sigma(x* + i0^+)
  double alpha = 0.0;        // small-y exponent of |F*(y)|
  double beta_pred = 0.0;    // 2 (1 + alpha)
  double beta_measured = 0.0;  // late-time decay exponent of |C_e(t)|^2
  double y_lo = 0.0, y_hi = 0.0;  // F* fit window
  double t_lo = 0.0, t_hi = 0.0;  // slope fit window
  double alpha_residual = 0.0;    // rms log-log fit residuals
  double beta_residual = 0.0;
  TimeSeries series;              // the full-system evolution used for the fit
};

// Non-Markovian decay at an in-band critical energy: fits the small-y power
// of F*(y) = 2 Sigma(x*-iy) / ((x*-iy-Delta)^2 - Sigma^2(x*-iy)) with
// Delta = x*, and the late-time log-log slope of the exact evolution on an
// open chain (window ends before the finite-size revival N / (2 max|v_g|)).
DecayFit vanhove_decay(const ModelParams& params, double g, double t_max,
                       int n_cells = 2000, double y_lo = 1e-4,
                       double y_hi = 1e-2);

double max_group_velocity(const ModelParams& p, int n_k = 8192);

}  // namespace essh
