#include "linalg.hpp"

#include <lapacke.h>

#include <mutex>
#include <stdexcept>
#include <vector>

extern "C" void openblas_set_num_threads(int);

namespace essh {

namespace {
// BLAS threading is pinned to one thread so results do not depend on the
// worker count of our own sample-level thread pool.
void pin_blas() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}
}  // namespace

EigenSystem eigh(const Eigen::MatrixXd& m) {
  pin_blas();
  const lapack_int n = static_cast<lapack_int>(m.rows());
  EigenSystem r;
  r.vectors = m;
  r.values.resize(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                         r.vectors.data(), n, r.values.data());
  if (info != 0) throw std::runtime_error("dsyevd failed");
  return r;
}

Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& m) {
  pin_blas();
  const lapack_int n = static_cast<lapack_int>(m.rows());
  Eigen::MatrixXd a = m;
  Eigen::VectorXd w(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
  if (info != 0) throw std::runtime_error("dsyevd failed");
  return w;
}

EigenSystem eigh_range(const Eigen::MatrixXd& m, double lo, double hi) {
  pin_blas();
  const lapack_int n = static_cast<lapack_int>(m.rows());
  Eigen::MatrixXd a = m;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, n);
  std::vector<lapack_int> isuppz(2 * static_cast<size_t>(n) + 2);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'V', 'L', n, a.data(), n, lo, hi, 0, 0,
      /*abstol=*/0.0, &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0) throw std::runtime_error("dsyevr failed");
  EigenSystem r;
  r.values = w.head(found);
  r.vectors = z.leftCols(found);
  return r;
}

}  // namespace essh
