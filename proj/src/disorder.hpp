#pragma once

#include <cstdint>
#include <vector>

#include "boundstate.hpp"
#include "chain.hpp"
#include "coupling.hpp"

namespace essh {

// Monte-Carlo spec for bound-state statistics under disorder.  The trivial
// reference model is the staggered chain (j1=j1p=J, no third-neighbour
// hoppings, omega_delta tuned to the same gap width).
struct EnsembleSpec {
  ModelParams params;
  int n_cells = 600;
  EmitterSpec emitter;
  DisorderKind kind = DisorderKind::chiral_preserving;
  std::vector<double> sigmas;
  int samples = 50;
  uint64_t master_seed = 0;
  double gap_lo = 0.0, gap_hi = 0.0;  // bound-state search window (clean gap)
  int n_threads = 1;
};

struct SampleRecord {
  int sigma_index = 0;
  int sample = 0;
  uint64_t seed = 0;
  bool failed = false;
  double sigma = 0.0;
  double e_bs = 0.0;
  double ipr = 0.0;
  int n_ingap = 0;
  double photon_b_fraction = 0.0;  // B share of the photonic weight
};

struct SigmaStats {
  double sigma = 0.0;
  int count = 0;     // successes
  int failures = 0;
  double mean_e = 0.0;
  double std_e = 0.0;   // sample standard deviation
  double mean_ipr = 0.0;
};

struct EnsembleResult {
  std::vector<SampleRecord> samples;  // canonical (sigma, sample) order
  std::vector<SigmaStats> stats;
};

// Staggered trivial bath with the same gap width as `reference`.
ModelParams staggered_counterpart(const ModelParams& reference);

// Deterministic given the spec (including master_seed); worker count only
// affects wall time, never output.
EnsembleResult run_ensemble(const EnsembleSpec& spec);

// Std(E_BS) per (sigma, size); reruns the ensemble at each lattice size with
// the emitter re-centred.
std::vector<EnsembleResult> size_scaling_study(EnsembleSpec spec,
                                               const std::vector<int>& sizes);

// Mean IPR per (g, sigma) cell for a local emitter.
std::vector<std::vector<double>> ipr_map(EnsembleSpec spec,
                                         const std::vector<double>& g_grid,
                                         const std::vector<double>& sigma_grid);

}  // namespace essh
