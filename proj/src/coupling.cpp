#include "coupling.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "bloch.hpp"

namespace essh {

RealSpaceHamiltonian compose(const RealSpaceHamiltonian& bath,
                             const std::vector<EmitterSpec>& emitters) {
  const int nb = bath.dim();
  const int ne = static_cast<int>(emitters.size());
  std::unordered_map<int, int> row_of_site;
  for (int r = 0; r < nb; ++r) row_of_site[bath.site_of_row[r]] = r;

  RealSpaceHamiltonian out;
  out.spec = bath.spec;
  out.site_of_row = bath.site_of_row;
  out.matrix = Eigen::MatrixXd::Zero(nb + ne, nb + ne);
  out.matrix.topLeftCorner(nb, nb) = bath.matrix;
  for (int a = 0; a < ne; ++a) {
    const auto& em = emitters[a];
    if (em.contacts.empty()) {
      throw Error(ErrorCode::invalid_argument, "emitter needs at least one contact");
    }
    const int row = nb + a;
    out.matrix(row, row) = em.delta;
    for (const auto& [site, weight] : em.contacts) {
      auto it = row_of_site.find(site);
      if (it == row_of_site.end()) {
        throw Error(ErrorCode::invalid_site, "emitter contact site not present");
      }
      out.matrix(row, it->second) += weight;
      out.matrix(it->second, row) += weight;
    }
    out.site_of_row.push_back(-1);
  }
  return out;
}

std::complex<double> self_energy(const ModelParams& p, std::complex<double> z,
                                 double g, int n_k) {
  if (!p.chiral()) {
    throw Error(ErrorCode::chirality_broken,
                "self_energy assumes a chiral (omega_delta=0) bath");
  }
  // full-period trapezoid == plain average over a uniform grid
  std::complex<double> acc = 0.0;
  for (int i = 0; i < n_k; ++i) {
    const double k =
        -std::numbers::pi + 2.0 * std::numbers::pi * i / n_k;
    const double w = dispersion(p, k);
    acc += z / (z * z - w * w);
  }
  return g * g * acc / static_cast<double>(n_k);
}

SelfEnergyCurve lamb_and_gamma(const ModelParams& p,
                               const std::vector<double>& delta_grid, double g,
                               double eta, int n_k) {
  if (eta <= 0.0) throw Error(ErrorCode::invalid_argument, "eta must be > 0");
  SelfEnergyCurve c;
  c.delta = delta_grid;
  c.lamb_shift.reserve(delta_grid.size());
  c.decay_rate.reserve(delta_grid.size());
  for (double d : delta_grid) {
    const std::complex<double> s = self_energy(p, {d, eta}, g, n_k);
    c.lamb_shift.push_back(s.real());
    c.decay_rate.push_back(-2.0 * s.imag());
  }
  return c;
}

}  // namespace essh
