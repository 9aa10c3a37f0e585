#include "bloch.hpp"

#include <cmath>
#include <numbers>

namespace essh {

namespace {
constexpr double kPi = std::numbers::pi;

// d(omega^2)/dk / 2 = dx*dx' + dy*dy'; same sign pattern as omega'(k).
double omega_slope(const ModelParams& p, double k) {
  const BlochVector d = bloch_vector(p, k);
  const double dxp = -(p.j1 + p.j3p) * std::sin(k) - 2.0 * p.j3 * std::sin(2.0 * k);
  const double dyp = (p.j1 - p.j3p) * std::cos(k) + 2.0 * p.j3 * std::cos(2.0 * k);
  return d.dx * dxp + d.dy * dyp;
}
}  // namespace

BlochVector bloch_vector(const ModelParams& p, double k) {
  BlochVector d;
  d.k = k;
  d.dx = p.j1p + p.j1 * std::cos(k) + p.j3p * std::cos(k) + p.j3 * std::cos(2.0 * k);
  d.dy = p.j1 * std::sin(k) - p.j3p * std::sin(k) + p.j3 * std::sin(2.0 * k);
  d.dz = p.omega_delta;
  return d;
}

double dispersion(const ModelParams& p, double k) {
  const BlochVector d = bloch_vector(p, k);
  return std::sqrt(d.dx * d.dx + d.dy * d.dy + d.dz * d.dz);
}

std::complex<double> off_diagonal_h(const ModelParams& p, double k) {
  const BlochVector d = bloch_vector(p, k);
  return {d.dx, -d.dy};
}

double min_dispersion(const ModelParams& p, int n_k) {
  double m = dispersion(p, -kPi);
  for (int i = 1; i < n_k; ++i) {
    m = std::min(m, dispersion(p, -kPi + 2.0 * kPi * i / n_k));
  }
  return m;
}

bool is_gapless(const ModelParams& p, int n_k) {
  // Coarse grid followed by slope bisection around the grid minimum.
  double best_k = -kPi, best = dispersion(p, -kPi);
  for (int i = 1; i < n_k; ++i) {
    const double k = -kPi + 2.0 * kPi * i / n_k;
    const double w = dispersion(p, k);
    if (w < best) {
      best = w;
      best_k = k;
    }
  }
  double lo = best_k - 2.0 * kPi / n_k, hi = best_k + 2.0 * kPi / n_k;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (omega_slope(p, mid) < 0.0 ? lo : hi) = mid;
  }
  best = std::min(best, dispersion(p, 0.5 * (lo + hi)));
  return best < 1e-9 * p.hopping_scale();
}

int winding_number(const ModelParams& p, int n_k) {
  if (!p.chiral()) {
    throw Error(ErrorCode::chirality_broken,
                "winding number requires omega_delta == 0");
  }
  if (is_gapless(p)) {
    throw Error(ErrorCode::gapless_model, "winding number undefined: gapless model");
  }
  n_k = std::max(n_k, 1024);
  for (; n_k <= (1 << 20); n_k *= 2) {
    double total = 0.0;
    double prev = std::arg(off_diagonal_h(p, -kPi));
    for (int i = 1; i <= n_k; ++i) {
      const double k = -kPi + 2.0 * kPi * i / n_k;
      const double cur = std::arg(off_diagonal_h(p, k));
      double d = cur - prev;
      if (d > kPi) d -= 2.0 * kPi;
      if (d < -kPi) d += 2.0 * kPi;
      total += d;
      prev = cur;
    }
    const double w = -total / (2.0 * kPi);
    const double res = std::abs(w - std::round(w));
    if (res < 1e-6) return static_cast<int>(std::lround(w));
  }
  throw Error(ErrorCode::gapless_model,
              "winding residual did not converge under grid refinement");
}

BandScan band_scan(const ModelParams& p, int n_k) {
  n_k = std::max(n_k, 1024);
  BandScan s;
  s.k_grid.resize(n_k);
  s.omega_upper.resize(n_k);
  s.omega_lower.resize(n_k);
  double wmin = 1e300, wmax = -1e300;
  for (int i = 0; i < n_k; ++i) {
    const double k = -kPi + 2.0 * kPi * i / n_k;
    const double w = dispersion(p, k);
    s.k_grid[i] = k;
    s.omega_upper[i] = w;
    s.omega_lower[i] = -w;
    wmin = std::min(wmin, w);
    wmax = std::max(wmax, w);
  }

  // Critical momenta of omega(k) on [0, pi]; k=0 and k=pi are always critical
  // (omega is even and 2pi-periodic), interior ones are bisected from sign
  // changes of the analytic slope.
  std::vector<double> crit_k = {0.0, kPi};
  const int m = std::max(n_k, 8192);
  double prev = omega_slope(p, 0.0);
  for (int i = 1; i <= m; ++i) {
    const double k = kPi * i / m;
    const double cur = omega_slope(p, k);
    if (prev == 0.0 && i > 1) crit_k.push_back(kPi * (i - 1) / m);
    if (prev * cur < 0.0) {
      double lo = kPi * (i - 1) / m, hi = k;
      const bool rising = prev < 0.0;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        ((omega_slope(p, mid) < 0.0) == rising ? lo : hi) = mid;
      }
      crit_k.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }

  std::vector<double> crit_w;
  for (double k : crit_k) {
    crit_w.push_back(dispersion(p, k));
    wmin = std::min(wmin, crit_w.back());
    wmax = std::max(wmax, crit_w.back());
  }

  s.gap_width = 2.0 * wmin;
  s.band_min = wmin;
  s.band_max = wmax;

  const double edge_tol = 1e-6 * std::max(1.0, p.hopping_scale());
  std::sort(crit_w.begin(), crit_w.end());
  for (double w : crit_w) {
    if (w < wmin + edge_tol || w > wmax - edge_tol) continue;  // band edge
    if (!s.vhs_energies.empty() && w - s.vhs_energies.back() < 1e-8) continue;
    s.vhs_energies.push_back(w);
  }
  return s;
}

}  // namespace essh
