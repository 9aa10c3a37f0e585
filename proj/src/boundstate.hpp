#pragma once

#include <complex>
#include <string>
#include <vector>

#include "chain.hpp"
#include "coupling.hpp"
#include "types.hpp"

namespace essh {

enum class GapLabel { lower, middle, upper };

// Emitter on sublattice A, cell 0; photon amplitudes indexed by cell offset j.
struct BoundState {
  double energy = 0.0;
  double c_e = 1.0;  // chosen real positive; state normalized overall
  int j_min = 0, j_max = 0;
  std::vector<double> photon_a;  // C_{j,a}, index j - j_min
  std::vector<double> photon_b;  // C_{j,b}
  GapLabel gap_label = GapLabel::middle;
  std::string method;

  double a(int j) const { return photon_a[j - j_min]; }
  double b(int j) const { return photon_b[j - j_min]; }
};

struct RootReport {
  // p(y) = j3p y^3 + j1p y^2 + j1 y + j3 (ascending storage)
  std::vector<double> coeffs;
  std::vector<std::complex<double>> roots;
  int inside_count = 0;  // |y| < 1
  int winding_from_roots = 0;  // 2 - inside_count
};

// E - Delta - Sigma_e(E) = 0 inside the requested gap, by bisection
// (the left side is strictly increasing within each gap).
double solve_pole(const ModelParams& p, double delta, double g, GapLabel gap,
                  int n_k = 1 << 18);

// Photon cloud from the BZ quadrature of the analytic coefficient integrals;
// valid at any strictly in-gap energy.
BoundState wavefunction_quadrature(const ModelParams& p, double e_bs, double g,
                                   int j_range, int n_k = 1 << 18);

// Closed-form E=0 cloud via residues of 1/p(y) inside the unit circle.
std::pair<BoundState, RootReport> wavefunction_residue(const ModelParams& p,
                                                       int j_range,
                                                       double g = 0.1);

RootReport root_report(const ModelParams& p);

struct NumericBoundState {
  double energy = 0.0;
  double c_e = 0.0;              // total emitter weight, sqrt
  Eigen::VectorXd state;         // full composed eigenvector, c_e sign fixed
  int n_ingap = 0;               // eigenvalues found in the search window
};

// In-(lo,hi) eigenstate of a composed Hamiltonian with maximal emitter
// overlap.  Emitter rows are those with site_of_row == -1.
NumericBoundState bound_state_numeric(const RealSpaceHamiltonian& h_full,
                                      double gap_lo, double gap_hi);

struct VacancyDecomposition {
  int zero_mode_count = 0;
  double captured_weight = 0.0;  // fraction of the photon norm in the subspace
};

// Projects photon amplitudes (indexed by lattice site) onto the zero-mode
// subspace of the chain with the given sites removed.
VacancyDecomposition vacancy_decomposition(const LatticeSpec& spec,
                                           const std::vector<int>& vacancy_sites,
                                           const Eigen::VectorXd& photon_by_site,
                                           double zero_window = 1e-7);

// Emitter-emitter coupling matrix from the bound-state profile; emitters
// given as (cell, sublattice 0=A/1=B).
Eigen::MatrixXd spin_coupling_matrix(const BoundState& bs,
                                     const std::vector<std::pair<int, int>>& emitters);

}  // namespace essh
