#include "floquet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace essh {

std::array<double, 6> tone_frequencies(const FrequencyLadder& l) {
  return {(l.delta + 2.0 * l.delta1) / 2.0,
          3.0 * l.delta / 2.0,
          (l.delta + 2.0 * l.delta2) / 2.0,
          (l.delta + l.delta1 - l.delta2) / 2.0,
          (l.delta - l.delta1 + l.delta2) / 2.0,
          (-l.delta + l.delta1 + l.delta2) / 2.0};
}

namespace {
// the six driven processes: tone pair (ti, tj), cavity pair (a, b); the
// third-neighbour bonds come first, then the alternating first-neighbour ones
struct Process {
  int ti, tj;  // 0-based tone indices
  int a, b;    // 1-based cavity indices
};
constexpr Process kProcesses[6] = {{0, 1, 1, 4}, {0, 2, 2, 5}, {1, 2, 3, 6},
                                   {3, 4, 1, 2}, {3, 5, 2, 3}, {4, 5, 4, 5}};
}  // namespace

FrequencyLadder make_ladder(double delta, double delta1, double delta2,
                            double ratio_aux) {
  FrequencyLadder l;
  l.delta = delta;
  l.delta1 = delta1;
  l.delta2 = delta2;
  const auto w = cavity_frequencies(l);
  double mean = 0.0;
  for (double x : w) mean += x;
  l.omega_bar = mean / 6.0;
  l.omega_aux = l.omega_bar + ratio_aux * (w[5] - w[0]);
  return l;
}

std::array<double, 6> cavity_frequencies(const FrequencyLadder& l) {
  const double d = l.delta, d1 = l.delta1, d2 = l.delta2;
  return {0.0,          d,
          d + d1,       2.0 * d + d1,
          2.0 * d + d1 + d2, 3.0 * d + d1 + d2};
}

ToneSchedule solve_tones(const FrequencyLadder& ladder,
                         const ModelParams& targets) {
  if (targets.j1 <= 0.0 || targets.j3p <= 0.0) {
    throw Error(ErrorCode::sqrt_domain,
                "amplitude assignment needs J1 > 0 and J3' > 0");
  }
  ToneSchedule s;
  s.targets = targets;
  s.omegas = tone_frequencies(ladder);
  for (double w : s.omegas) {
    if (w <= 0.0) {
      throw Error(ErrorCode::non_positive_tone,
                  "ladder admits no positive-frequency tone solution");
    }
  }
  const double r3 = std::sqrt(targets.j3p), r1 = std::sqrt(targets.j1);
  s.amps = {r3, targets.j3 / r3, r3, r1, r1, targets.j1p / r1};
  if (targets.j3 > 0.0) {
    const double e3 = std::sqrt(targets.j3);
    s.amps_even = {e3, targets.j3p / e3, e3, r1, r1, targets.j1p / r1};
    s.even_variant_valid = true;
  }
  return s;
}

std::vector<Collision> check_collisions(const ToneSchedule& schedule,
                                        const FrequencyLadder& ladder,
                                        double resolution) {
  const auto& om = schedule.omegas;
  if (resolution < 0.0) {
    auto sorted = om;
    std::sort(sorted.begin(), sorted.end());
    double spacing = sorted[5] - sorted[0];
    for (int i = 1; i < 6; ++i) {
      if (sorted[i] - sorted[i - 1] > 0.0) {
        spacing = std::min(spacing, sorted[i] - sorted[i - 1]);
      }
    }
    resolution = 1e-2 * spacing;
  }

  const auto w = cavity_frequencies(ladder);
  struct Target {
    std::string label;
    double value;
  };
  std::vector<Target> detunings;
  for (int a = 2; a <= 6; ++a) {
    for (int b = 1; b < a; ++b) {
      detunings.push_back(
          {"D" + std::to_string(a) + std::to_string(b), w[a - 1] - w[b - 1]});
    }
  }

  auto intended = [](int i, int j, int sign, const std::string& label) {
    if (sign != +1) return false;
    if (i == 1 && j == 2) return label == "D41";
    if (i == 1 && j == 3) return label == "D52";
    if (i == 2 && j == 3) return label == "D63";
    if (i == 4 && j == 5)
      return label == "D21" || label == "D43" || label == "D65";
    if (i == 4 && j == 6) return label == "D32";
    if (i == 5 && j == 6) return label == "D54";
    return false;
  };

  std::vector<Collision> out;
  auto probe = [&](int i, int j, int sign, double combo) {
    for (const auto& d : detunings) {
      if (std::abs(std::abs(combo) - std::abs(d.value)) < resolution) {
        out.push_back(
            {i, j, sign, d.label, combo, d.value, intended(i, j, sign, d.label)});
      }
    }
  };
  for (int i = 1; i <= 6; ++i) {
    probe(i, i, +1, 2.0 * om[i - 1]);
    for (int j = i + 1; j <= 6; ++j) {
      probe(i, j, +1, om[i - 1] + om[j - 1]);
      probe(i, j, -1, om[i - 1] - om[j - 1]);
    }
  }
  return out;
}

double tone_table_deviation(const FrequencyLadder& ladder) {
  const auto om = tone_frequencies(ladder);
  const double d = ladder.delta, d1 = ladder.delta1, d2 = ladder.delta2;
  struct Row {
    int i, j, sign;
    double closed;
  };
  const Row rows[24] = {
      // same-group differences
      {1, 2, -1, d1 - d},
      {1, 3, -1, d1 - d2},
      {2, 3, -1, d - d2},
      {4, 5, -1, d1 - d2},
      {5, 6, -1, d - d1},
      {6, 4, -1, d2 - d},
      // cross-group differences
      {1, 4, -1, (d1 + d2) / 2.0},
      {1, 5, -1, (3.0 * d1 - d2) / 2.0},
      {1, 6, -1, (2.0 * d + d1 - d2) / 2.0},
      {2, 4, -1, (2.0 * d - d1 + d2) / 2.0},
      {2, 5, -1, (2.0 * d + d1 - d2) / 2.0},
      {2, 6, -1, (4.0 * d - d1 - d2) / 2.0},
      {3, 4, -1, (3.0 * d2 - d1) / 2.0},
      {3, 5, -1, (d1 + d2) / 2.0},
      {3, 6, -1, (2.0 * d + d2 - d1) / 2.0},
      // cross-group sums
      {1, 4, +1, (2.0 * d + 3.0 * d1 - d2) / 2.0},
      {1, 5, +1, (2.0 * d + d1 + d2) / 2.0},
      {1, 6, +1, (3.0 * d1 + d2) / 2.0},
      {2, 4, +1, (4.0 * d + d1 - d2) / 2.0},
      {2, 5, +1, (4.0 * d - d1 + d2) / 2.0},
      {2, 6, +1, (2.0 * d + d1 + d2) / 2.0},
      {3, 4, +1, (2.0 * d + d1 + d2) / 2.0},
      {3, 5, +1, (2.0 * d + 3.0 * d2 - d1) / 2.0},
      {3, 6, +1, (3.0 * d2 + d1) / 2.0},
  };
  double worst = 0.0;
  for (const auto& r : rows) {
    const double combo = r.sign > 0 ? om[r.i - 1] + om[r.j - 1]
                                    : om[r.i - 1] - om[r.j - 1];
    worst = std::max(worst, std::abs(combo - r.closed));
  }
  return worst;
}

namespace {
using State = std::array<std::complex<double>, 7>;

// -i H(t) psi for the star-coupled cluster in the interaction picture
State deriv(const State& psi, double t, const std::array<double, 6>& freqs,
            double omega_aux, double drive_scale,
            const std::array<double, 2>& tone_om,
            const std::array<double, 2>& tone_amp) {
  const double g = drive_scale * (tone_amp[0] * std::cos(tone_om[0] * t) +
                                  tone_amp[1] * std::cos(tone_om[1] * t));
  State d{};
  const std::complex<double> mi(0.0, -1.0);
  std::complex<double> acc = 0.0;
  for (int a = 0; a < 6; ++a) {
    const std::complex<double> phase =
        std::exp(std::complex<double>(0.0, (freqs[a] - omega_aux) * t));
    d[a] = mi * g * phase * psi[6];
    acc += std::conj(phase) * psi[a];
  }
  d[6] = mi * g * acc;
  return d;
}
}  // namespace

ClusterResult simulate_cluster(const FrequencyLadder& ladder,
                               const ToneSchedule& schedule, double dt,
                               const std::array<bool, 6>& mask,
                               bool even_window) {
  if (ladder.omega_aux <= ladder.omega_bar) {
    throw Error(ErrorCode::sqrt_domain,
                "auxiliary cavity must sit above the ladder mean");
  }
  if (even_window && !schedule.even_variant_valid) {
    throw Error(ErrorCode::sqrt_domain,
                "even-window amplitudes need J3 > 0");
  }
  const auto& amps = even_window ? schedule.amps_even : schedule.amps;
  const ModelParams& p = schedule.targets;
  const double targets[6] = {even_window ? p.j3p : p.j3,
                             even_window ? p.j3 : p.j3p,
                             even_window ? p.j3p : p.j3,
                             p.j1, p.j1p, p.j1p};

  ClusterResult res;
  res.cavity_freqs = cavity_frequencies(ladder);

  double max_freq = std::abs(ladder.omega_aux - res.cavity_freqs[0]);
  for (double w : res.cavity_freqs) {
    max_freq = std::max(max_freq, std::abs(ladder.omega_aux - w));
  }
  for (double w : schedule.omegas) max_freq = std::max(max_freq, w);
  if (dt <= 0.0) {
    dt = 1.0 / (60.0 * max_freq);
  } else if (dt > 1.0 / (50.0 * max_freq)) {
    throw Error(ErrorCode::step_too_large,
                "time step must resolve the fastest interaction-picture phase");
  }

  const double span = res.cavity_freqs[5] - res.cavity_freqs[0];
  double max_hop = 0.0;
  for (double j : targets) max_hop = std::max(max_hop, std::abs(j));
  const double min_det =
      std::min({ladder.delta, ladder.delta1, ladder.delta2});
  res.hierarchy_ok = (ladder.omega_aux - ladder.omega_bar) >= 10.0 * span &&
                     min_det >= 10.0 * max_hop;

  // extra sqrt(2) so the rotating term of g(t)^2 / (omega_aux - omega_bar)
  // carries weight A_i A_j, not A_i A_j / 2
  const double drive_scale =
      std::sqrt(2.0) * std::sqrt(ladder.omega_aux - ladder.omega_bar);

  for (int k = 0; k < 6; ++k) {
    if (!mask[k]) continue;
    const Process& pr = kProcesses[k];
    ExtractedHopping hop;
    hop.alpha = pr.a;
    hop.beta = pr.b;
    hop.target = targets[k];
    const double j_exp = std::abs(amps[pr.ti] * amps[pr.tj]);
    if (j_exp < 1e-12) {
      res.hoppings.push_back(hop);
      continue;
    }
    const std::array<double, 2> tw = {schedule.omegas[pr.ti],
                                      schedule.omegas[pr.tj]};
    const std::array<double, 2> ta = {amps[pr.ti], amps[pr.tj]};

    auto f = [&](const State& s, double t) {
      return deriv(s, t, res.cavity_freqs, ladder.omega_aux, drive_scale, tw,
                   ta);
    };
    State psi{};
    psi[pr.a - 1] = 1.0;
    std::vector<double> pop;
    pop.push_back(std::norm(psi[pr.b - 1]));
    double t_end = 1.3 * std::numbers::pi / (2.0 * j_exp);
    // grow the window until the first transfer maximum lies strictly inside
    size_t i_max = 0;
    for (int attempt = 0; attempt < 5; ++attempt) {
      const int n_steps = static_cast<int>(std::ceil(t_end / dt));
      for (int step = static_cast<int>(pop.size()) - 1; step < n_steps;
           ++step) {
        const double t = step * dt;
        const State k1 = f(psi, t);
        State s2, s3, s4;
        for (int i = 0; i < 7; ++i) s2[i] = psi[i] + 0.5 * dt * k1[i];
        const State k2 = f(s2, t + 0.5 * dt);
        for (int i = 0; i < 7; ++i) s3[i] = psi[i] + 0.5 * dt * k2[i];
        const State k3 = f(s3, t + 0.5 * dt);
        for (int i = 0; i < 7; ++i) s4[i] = psi[i] + dt * k3[i];
        const State k4 = f(s4, t + dt);
        for (int i = 0; i < 7; ++i) {
          psi[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        pop.push_back(std::norm(psi[pr.b - 1]));
      }
      i_max = 0;
      for (size_t i = 0; i < pop.size(); ++i) {
        if (pop[i] > pop[i_max]) i_max = i;
      }
      if (i_max + 1 < pop.size() && i_max < (pop.size() * 19) / 20) break;
      t_end *= 1.6;
    }

    if (i_max > 0 && i_max + 1 < pop.size()) {
      double shift = 0.0;
      const double denom = pop[i_max - 1] - 2.0 * pop[i_max] + pop[i_max + 1];
      if (denom < 0.0) shift = 0.5 * (pop[i_max - 1] - pop[i_max + 1]) / denom;
      const double t_half = (static_cast<double>(i_max) + shift) * dt;
      hop.extracted = std::numbers::pi / (2.0 * t_half);
    }
    res.hoppings.push_back(hop);
  }
  return res;
}

}  // namespace essh
