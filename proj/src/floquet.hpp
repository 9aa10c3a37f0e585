#pragma once

#include <array>
#include <string>
#include <vector>

#include "types.hpp"

namespace essh {

// Main-cavity frequency ladder: intra-cell detuning delta, inter-cell
// detunings delta1/delta2 (alternating), plus the auxiliary-cavity offset.
struct FrequencyLadder {
  double delta = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double omega_bar = 0.0;  // mean main-cavity frequency
  double omega_aux = 0.0;  // auxiliary-cavity frequency
};

// Ladder with hierarchy ratios: (omega_aux - omega_bar) = ratio_aux * span,
// span = largest detuning of the six-cavity window.
FrequencyLadder make_ladder(double delta, double delta1, double delta2,
                            double ratio_aux = 20.0);

// Frequencies of the six main cavities in a window whose first site sits on
// sublattice B, relative to the first cavity.
std::array<double, 6> cavity_frequencies(const FrequencyLadder& ladder);

// Unique solution Omega_1..Omega_6 of the six resonance conditions; may be
// non-positive for an infeasible ladder (solve_tones rejects those).
std::array<double, 6> tone_frequencies(const FrequencyLadder& ladder);

struct Collision {
  int i = 0, j = 0;    // tone indices (1-based); j == i encodes 2*Omega_i
  int sign = +1;       // +1: Omega_i + Omega_j, -1: Omega_i - Omega_j
  std::string matched; // detuning label, e.g. "D41", "D54"
  double combo = 0.0;
  double target = 0.0;
  bool intended = false;
};

struct ToneSchedule {
  std::array<double, 6> omegas{};  // Omega_1..Omega_6
  std::array<double, 6> amps{};    // A_1..A_6 (odd windows)
  std::array<double, 6> amps_even{};  // J3 <-> J3' swapped variant
  bool even_variant_valid = false;    // requires J3 > 0
  ModelParams targets;
  std::vector<Collision> collisions;  // filled by check_collisions
};

// Unique solution of the six resonance conditions plus the amplitude
// products A1A2=A2A3=J3, A1A3=J3', A4A5=J1, A4A6=A5A6=J1'.
ToneSchedule solve_tones(const FrequencyLadder& ladder,
                         const ModelParams& targets);

// Every Omega_i +/- Omega_j (i != j) and 2*Omega_i against every detuning
// +/-Delta_ab of the six-cavity window.  resolution < 0 selects
// 1e-2 * (smallest tone spacing).  Report-only; spurious matches are the
// entries with intended == false.
std::vector<Collision> check_collisions(const ToneSchedule& schedule,
                                        const FrequencyLadder& ladder,
                                        double resolution = -1.0);

// Closed forms of the 24 cross/same-group tone combinations in terms of
// (delta, delta1, delta2); returns the largest deviation from the assembled
// schedule (identity check).
double tone_table_deviation(const FrequencyLadder& ladder);

struct ExtractedHopping {
  int alpha = 0, beta = 0;  // 1-based cavity indices
  double target = 0.0;
  double extracted = 0.0;
};

struct ClusterResult {
  std::array<double, 6> cavity_freqs{};
  std::vector<ExtractedHopping> hoppings;
  bool hierarchy_ok = true;  // ratios >= 10 between adjacent scales
};

// Integrates the driven six-cavity + auxiliary cluster (interaction picture,
// classical RK4) and extracts each targeted hopping from the first
// population-transfer half-period with only the matching tone pair active.
// mask selects a subset of the six intended processes (default all);
// even_window uses the J3 <-> J3' swapped amplitudes.  dt <= 0 picks
// 1/(60 * largest frequency).
ClusterResult simulate_cluster(const FrequencyLadder& ladder,
                               const ToneSchedule& schedule, double dt = -1.0,
                               const std::array<bool, 6>& mask =
                                   {true, true, true, true, true, true},
                               bool even_window = false);

}  // namespace essh
