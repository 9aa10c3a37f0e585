#include "dynamics.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bloch.hpp"
#include "linalg.hpp"

namespace essh {

namespace {
int first_emitter_row(const RealSpaceHamiltonian& h) {
  for (int r = 0; r < h.dim(); ++r) {
    if (h.site_of_row[r] < 0) return r;
  }
  throw Error(ErrorCode::invalid_argument,
              "composed Hamiltonian has no emitter rows");
}

void check_ascending(const std::vector<double>& t_grid) {
  for (size_t i = 1; i < t_grid.size(); ++i) {
    if (t_grid[i] <= t_grid[i - 1]) {
      throw Error(ErrorCode::invalid_argument, "t_grid must be ascending");
    }
  }
}

// least squares y = a + b x; returns {b, rms residual}
std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double a = (sy - b * sx) / n;
  double acc = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (a + b * x[i]);
    acc += r * r;
  }
  return {b, std::sqrt(acc / n)};
}
}  // namespace

TimeSeries evolve(const RealSpaceHamiltonian& h_full,
                  const std::vector<double>& t_grid,
                  const Eigen::VectorXcd* initial) {
  check_ascending(t_grid);
  const int n = h_full.dim();
  const int e_row = first_emitter_row(h_full);
  EigenSystem es = eigh(h_full.matrix);

  Eigen::VectorXcd w;
  if (initial != nullptr) {
    if (initial->size() != n) {
      throw Error(ErrorCode::invalid_argument, "initial state has wrong size");
    }
    w = es.vectors.transpose() * (*initial);
  } else {
    w = es.vectors.row(e_row).transpose().cast<std::complex<double>>();
  }

  TimeSeries ts;
  ts.times = t_grid;
  ts.c_e.reserve(t_grid.size());
  ts.population.reserve(t_grid.size());
  for (double t : t_grid) {
    std::complex<double> c = 0.0;
    for (int m = 0; m < n; ++m) {
      c += es.vectors(e_row, m) * w(m) *
           std::exp(std::complex<double>(0.0, -es.values(m) * t));
    }
    ts.c_e.push_back(c);
    ts.population.push_back(std::norm(c));
  }
  return ts;
}

Eigen::VectorXcd evolve_state(const RealSpaceHamiltonian& h_full,
                              const Eigen::VectorXcd& initial, double t) {
  if (initial.size() != h_full.dim()) {
    throw Error(ErrorCode::invalid_argument, "initial state has wrong size");
  }
  EigenSystem es = eigh(h_full.matrix);
  Eigen::VectorXcd w = es.vectors.transpose() * initial;
  for (int m = 0; m < w.size(); ++m) {
    w(m) *= std::exp(std::complex<double>(0.0, -es.values(m) * t));
  }
  return es.vectors * w;
}

std::vector<SpectralPeak> spectrum(const TimeSeries& ts,
                                   double rel_threshold) {
  const size_t n = ts.times.size();
  if (n < 32) {
    throw Error(ErrorCode::grid_too_short, "spectrum needs >= 32 samples");
  }
  const double dt = ts.times[1] - ts.times[0];
  for (size_t i = 1; i < n; ++i) {
    if (std::abs(ts.times[i] - ts.times[i - 1] - dt) > 1e-9 * dt) {
      throw Error(ErrorCode::grid_too_short, "spectrum needs a uniform grid");
    }
  }
  size_t n_pad = 1;
  while (n_pad < 8 * n) n_pad <<= 1;
  std::vector<std::complex<double>> in(n_pad, 0.0);
  std::copy(ts.c_e.begin(), ts.c_e.end(), in.begin());
  std::vector<std::complex<double>> out(n_pad);
  Eigen::FFT<double> fft;
  fft.fwd(out, in);

  std::vector<double> mag(n_pad);
  double peak = 0.0;
  for (size_t m = 0; m < n_pad; ++m) {
    mag[m] = std::abs(out[m]);
    peak = std::max(peak, mag[m]);
  }
  if (peak == 0.0) return {};

  std::vector<SpectralPeak> peaks;
  const double thresh = rel_threshold * peak;
  for (size_t m = 0; m < n_pad; ++m) {
    const double l = mag[(m + n_pad - 1) % n_pad];
    const double r = mag[(m + 1) % n_pad];
    if (mag[m] < thresh || mag[m] < l || mag[m] <= r) continue;
    // parabolic refinement on the log magnitude
    double shift = 0.0;
    if (l > 0.0 && r > 0.0) {
      const double ll = std::log(l), lc = std::log(mag[m]), lr = std::log(r);
      const double denom = ll - 2.0 * lc + lr;
      if (denom < 0.0) shift = 0.5 * (ll - lr) / denom;
    }
    const double bin = static_cast<double>(m) + shift;
    double cycles = bin / static_cast<double>(n_pad);
    if (cycles > 0.5) cycles -= 1.0;
    // forward DFT uses e^{-2 pi i m n / N}: an e^{-i w t} component lands on
    // the bin with w = +2 pi cycles / dt
    peaks.push_back({2.0 * std::numbers::pi * cycles / dt,
                     mag[m] / static_cast<double>(n)});
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const SpectralPeak& a, const SpectralPeak& b) {
              return a.frequency < b.frequency;
            });
  return peaks;
}

EffectiveModel effective_model(const RealSpaceHamiltonian& bath,
                               const EmitterSpec& emitter, double gap_window) {
  if (gap_window < 0.0) {
    gap_window = band_scan(bath.spec.params).gap_width / 2.0;
  }
  EdgeStateSet edges = edge_states(bath, gap_window);
  if (edges.energies.empty()) {
    throw Error(ErrorCode::no_edge_states,
                "no edge modes inside the gap window");
  }
  EffectiveModel m;
  m.delta = emitter.delta;
  m.edge_energies = edges.energies;
  for (int i = 0; i < static_cast<int>(edges.energies.size()); ++i) {
    double gt = 0.0;
    for (const auto& [site, weight] : emitter.contacts) {
      bool found = false;
      for (int r = 0; r < bath.dim(); ++r) {
        if (bath.site_of_row[r] == site) {
          gt += weight * edges.states(r, i);
          found = true;
          break;
        }
      }
      if (!found) {
        throw Error(ErrorCode::invalid_site, "emitter contact site not present");
      }
    }
    m.couplings.push_back(gt);
    m.g_combined += gt * gt;
  }
  m.g_combined = std::sqrt(m.g_combined);
  return m;
}

TimeSeries effective_evolve(const EffectiveModel& m,
                            const std::vector<double>& t_grid) {
  check_ascending(t_grid);
  const int ne = static_cast<int>(m.edge_energies.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(ne + 1, ne + 1);
  h(0, 0) = m.delta;
  for (int i = 0; i < ne; ++i) {
    h(0, i + 1) = h(i + 1, 0) = m.couplings[i];
    h(i + 1, i + 1) = m.edge_energies[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  TimeSeries ts;
  ts.times = t_grid;
  for (double t : t_grid) {
    std::complex<double> c = 0.0;
    for (int mm = 0; mm <= ne; ++mm) {
      c += es.eigenvectors()(0, mm) * es.eigenvectors()(0, mm) *
           std::exp(std::complex<double>(0.0, -es.eigenvalues()(mm) * t));
    }
    ts.c_e.push_back(c);
    ts.population.push_back(std::norm(c));
  }
  return ts;
}

double weak_oscillation_population(double eps, double g_eff, double t) {
  const double d = eps * eps + 2.0 * g_eff * g_eff;
  return eps * eps / d + (2.0 * g_eff * g_eff / d) * std::cos(std::sqrt(d) * t);
}

double max_group_velocity(const ModelParams& p, int n_k) {
  double vmax = 0.0;
  const double dk = 2.0 * std::numbers::pi / n_k;
  double prev = dispersion(p, -std::numbers::pi);
  for (int i = 1; i <= n_k; ++i) {
    const double w = dispersion(p, -std::numbers::pi + i * dk);
    vmax = std::max(vmax, std::abs(w - prev) / dk);
    prev = w;
  }
  return vmax;
}

DecayFit vanhove_decay(const ModelParams& params, double g, double t_max,
                       int n_cells, double y_lo, double y_hi) {
  BandScan scan = band_scan(params);
  if (scan.vhs_energies.empty()) {
    throw Error(ErrorCode::no_vhs, "no in-band critical energy");
  }
  // pick the critical energy deepest inside the band
  double x_star = scan.vhs_energies.front();
  double best = -1.0;
  for (double e : scan.vhs_energies) {
    const double d = std::min(e - scan.band_min, scan.band_max - e);
    if (d > best) {
      best = d;
      x_star = e;
    }
  }

  DecayFit fit;
  fit.x_star = x_star;
  fit.y_lo = y_lo;
  fit.y_hi = y_hi;
  fit.gamma_markov =
      -2.0 * self_energy(params, {x_star, 1e-6}, g).imag();

  // small-y power of |F*(y)| with Delta = x*
  const int ny = 40;
  std::vector<double> lx, ly;
  for (int i = 0; i < ny; ++i) {
    const double y =
        y_lo * std::pow(y_hi / y_lo, static_cast<double>(i) / (ny - 1));
    const std::complex<double> z(x_star, -y);
    const std::complex<double> sig = self_energy(params, z, g);
    const std::complex<double> zmd(0.0, -y);  // z - Delta
    const std::complex<double> f = 2.0 * sig / (zmd * zmd - sig * sig);
    lx.push_back(std::log(y));
    ly.push_back(std::log(std::abs(f)));
  }
  auto [alpha, ares] = fit_line(lx, ly);
  fit.alpha = alpha;
  fit.alpha_residual = ares;
  fit.beta_pred = 2.0 * (1.0 + alpha);

  // exact evolution on a large open chain, emitter at the central A site
  LatticeSpec ls;
  ls.n_cells = n_cells;
  ls.params = params;
  auto h = compose(build_hamiltonian(ls),
                   {EmitterSpec::local(x_star, 2 * (n_cells / 2), g)});
  const double t_rev = n_cells / (2.0 * max_group_velocity(params));
  fit.t_hi = std::min(t_max, 0.8 * t_rev);
  fit.t_lo = std::min(std::max(8.0 / fit.gamma_markov, 5.0), fit.t_hi / 10.0);
  std::vector<double> t_grid;
  const int nt = 400;
  for (int i = 0; i < nt; ++i) {
    t_grid.push_back(0.1 * std::pow(fit.t_hi / 0.1,
                                    static_cast<double>(i) / (nt - 1)));
  }
  fit.series = evolve(h, t_grid);

  std::vector<double> sx, sy;
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < fit.t_lo || fit.series.population[i] < 1e-300) continue;
    sx.push_back(std::log(t_grid[i]));
    sy.push_back(std::log(fit.series.population[i]));
  }
  if (sx.size() < 8) {
    throw Error(ErrorCode::grid_too_short, "slope window holds < 8 samples");
  }
  auto [slope, bres] = fit_line(sx, sy);
  fit.beta_measured = -slope;
  fit.beta_residual = bres;
  return fit;
}

}  // namespace essh
