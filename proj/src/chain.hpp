#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "types.hpp"

namespace essh {

struct LatticeSpec {
  int n_cells = 0;
  bool periodic = false;
  ModelParams params;
};

enum class DisorderKind { chiral_preserving, chiral_breaking };

struct DisorderSpec {
  DisorderKind kind = DisorderKind::chiral_preserving;
  double sigma = 0.0;
  uint64_t seed = 0;
};

// Site convention: site s in [0, 2N); sublattice A if s even, B if s odd;
// cell(s) = s/2.
inline int sublattice_of(int site) { return site & 1; }  // 0=A, 1=B
inline int cell_of(int site) { return site / 2; }

struct RealSpaceHamiltonian {
  Eigen::MatrixXd matrix;
  std::vector<int> site_of_row;  // original site index per row (vacancies removed)
  LatticeSpec spec;
  int dim() const { return static_cast<int>(matrix.rows()); }
};

RealSpaceHamiltonian build_hamiltonian(
    const LatticeSpec& spec,
    const std::optional<DisorderSpec>& disorder = std::nullopt,
    const std::vector<int>& vacancies = {});

struct EdgeStateSet {
  std::vector<double> energies;
  Eigen::MatrixXd states;                    // column per state, normalized
  std::vector<std::pair<double, double>> sublattice_weights;  // (w_A, w_B)
  std::vector<std::pair<double, double>> side_weights;        // (left, right)
};

// All eigenpairs with |e| < gap_window, for an open-boundary chain.
EdgeStateSet edge_states(const RealSpaceHamiltonian& h, double gap_window);

double ipr(const Eigen::VectorXd& state);

struct LocalizationProfile {
  std::vector<int> cells;
  std::vector<double> prob_a;
  std::vector<double> prob_b;
  double dominant_sublattice_fraction = 0.0;
  int dominant_sublattice = 0;             // 0=A, 1=B
  double left_fraction = 0.0;              // cells strictly left of reference
  double right_fraction = 0.0;             // cells strictly right of reference
};

// Probability table by (cell, sublattice).  Rows of `state` map to sites via
// site_of_row; the reference cell splits the left/right fractions.
LocalizationProfile localization_profile(const Eigen::VectorXd& state,
                                         const std::vector<int>& site_of_row,
                                         int n_cells, int reference_cell);

}  // namespace essh
