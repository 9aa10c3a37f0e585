#pragma once

#include <Eigen/Dense>

namespace essh {

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column i belongs to values(i)
};

// Full symmetric eigendecomposition (LAPACK divide-and-conquer).
EigenSystem eigh(const Eigen::MatrixXd& m);

// Eigenpairs with eigenvalue in (lo, hi] only (LAPACK RRR driver); much
// cheaper than eigh when only a few in-gap states are needed.
EigenSystem eigh_range(const Eigen::MatrixXd& m, double lo, double hi);

// Eigenvalues only.
Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& m);

}  // namespace essh
