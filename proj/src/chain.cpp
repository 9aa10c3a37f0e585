#include "chain.hpp"

#include <algorithm>
#include <cmath>

#include "linalg.hpp"
#include "rng.hpp"

namespace essh {

namespace {
void add_bond(Eigen::MatrixXd& h, int i, int j, double v) {
  h(i, j) += v;
  h(j, i) += v;
}
}  // namespace

RealSpaceHamiltonian build_hamiltonian(const LatticeSpec& spec,
                                       const std::optional<DisorderSpec>& disorder,
                                       const std::vector<int>& vacancies) {
  const int n = spec.n_cells;
  if (n < 4) throw Error(ErrorCode::size_too_small, "need n_cells >= 4");
  const int ns = 2 * n;
  for (int v : vacancies) {
    if (v < 0 || v >= ns) throw Error(ErrorCode::invalid_site, "vacancy out of range");
  }
  if (disorder && spec.periodic) {
    throw Error(ErrorCode::invalid_argument,
                "disorder is only supported on open chains");
  }

  const ModelParams& p = spec.params;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(ns, ns);

  // staggered diagonal: +omega_delta on A, -omega_delta on B
  for (int s = 0; s < ns; ++s) {
    h(s, s) = (sublattice_of(s) == 0) ? p.omega_delta : -p.omega_delta;
  }

  // first neighbours: A_j-B_j intra-cell J1', B_j-A_{j+1} inter-cell J1
  // third neighbours: A_j-B_{j+1} is J3', B_j-A_{j+2} is J3
  const int last1 = spec.periodic ? ns : ns - 1;
  for (int s = 0; s < last1; ++s) {
    add_bond(h, s, (s + 1) % ns, (s % 2 == 0) ? p.j1p : p.j1);
  }
  const int last3 = spec.periodic ? ns : ns - 3;
  for (int s = 0; s < last3; ++s) {
    add_bond(h, s, (s + 3) % ns, (s % 2 == 0) ? p.j3p : p.j3);
  }

  if (disorder && disorder->sigma > 0.0) {
    SplitMix64 rng(disorder->seed);
    const double sg = disorder->sigma;
    if (disorder->kind == DisorderKind::chiral_preserving) {
      for (int s = 0; s + 1 < ns; ++s) add_bond(h, s, s + 1, sg * rng.next_normal());
      for (int s = 0; s + 3 < ns; ++s) add_bond(h, s, s + 3, sg * rng.next_normal());
    } else {
      for (int s = 0; s < ns; ++s) h(s, s) += sg * rng.next_normal();
      for (int s = 0; s + 2 < ns; ++s) add_bond(h, s, s + 2, sg * rng.next_normal());
    }
  }

  RealSpaceHamiltonian out;
  out.spec = spec;
  if (vacancies.empty()) {
    out.matrix = std::move(h);
    out.site_of_row.resize(ns);
    for (int s = 0; s < ns; ++s) out.site_of_row[s] = s;
    return out;
  }

  std::vector<bool> removed(ns, false);
  for (int v : vacancies) removed[v] = true;
  for (int s = 0; s < ns; ++s) {
    if (!removed[s]) out.site_of_row.push_back(s);
  }
  const int m = static_cast<int>(out.site_of_row.size());
  out.matrix.resize(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      out.matrix(i, j) = h(out.site_of_row[i], out.site_of_row[j]);
    }
  }
  return out;
}

EdgeStateSet edge_states(const RealSpaceHamiltonian& h, double gap_window) {
  EigenSystem es = eigh_range(h.matrix, -gap_window, gap_window);
  // eigh_range uses a half-open interval; drop anything at |e| >= window
  EdgeStateSet out;
  const int ns = h.dim();
  for (int i = 0; i < es.values.size(); ++i) {
    if (std::abs(es.values(i)) >= gap_window) continue;
    Eigen::VectorXd v = es.vectors.col(i).normalized();
    double wa = 0.0, wleft = 0.0;
    for (int r = 0; r < ns; ++r) {
      const double pr = v(r) * v(r);
      if (sublattice_of(h.site_of_row[r]) == 0) wa += pr;
      if (h.site_of_row[r] < h.spec.n_cells) wleft += pr;  // left half-chain
    }
    out.energies.push_back(es.values(i));
    out.states.conservativeResize(ns, out.energies.size());
    out.states.col(out.energies.size() - 1) = v;
    out.sublattice_weights.emplace_back(wa, 1.0 - wa);
    out.side_weights.emplace_back(wleft, 1.0 - wleft);
  }
  return out;
}

double ipr(const Eigen::VectorXd& state) {
  if (std::abs(state.squaredNorm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::not_normalized, "ipr requires a normalized state");
  }
  double s4 = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    const double p = state(i) * state(i);
    s4 += p * p;
  }
  return 1.0 / s4;
}

LocalizationProfile localization_profile(const Eigen::VectorXd& state,
                                         const std::vector<int>& site_of_row,
                                         int n_cells, int reference_cell) {
  LocalizationProfile out;
  out.cells.resize(n_cells);
  out.prob_a.assign(n_cells, 0.0);
  out.prob_b.assign(n_cells, 0.0);
  for (int c = 0; c < n_cells; ++c) out.cells[c] = c;

  double wa = 0.0, wb = 0.0;
  const double norm = state.squaredNorm();
  for (int r = 0; r < state.size() && r < static_cast<int>(site_of_row.size()); ++r) {
    const int s = site_of_row[r];
    if (s < 0) continue;  // emitter rows carry no lattice position
    const double pr = state(r) * state(r) / norm;
    if (sublattice_of(s) == 0) {
      out.prob_a[cell_of(s)] += pr;
      wa += pr;
    } else {
      out.prob_b[cell_of(s)] += pr;
      wb += pr;
    }
    if (cell_of(s) < reference_cell) out.left_fraction += pr;
    if (cell_of(s) > reference_cell) out.right_fraction += pr;
  }
  out.dominant_sublattice = (wa >= wb) ? 0 : 1;
  out.dominant_sublattice_fraction = std::max(wa, wb);
  return out;
}

}  // namespace essh
