#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "bloch.hpp"
#include "chain.hpp"
#include "coupling.hpp"
#include "linalg.hpp"

using namespace essh;
using namespace std::complex_literals;

namespace {
LatticeSpec lattice(int n, double j3, double j3p, bool periodic = false) {
  LatticeSpec s;
  s.n_cells = n;
  s.periodic = periodic;
  s.params.j3 = j3;
  s.params.j3p = j3p;
  return s;
}
}  // namespace

TEST_CASE("compose block structure") {
  auto bath = build_hamiltonian(lattice(6, 0.8, 0.5));
  // decoupled emitter: block diagonal, eigenvalue exactly Delta
  auto h0 = compose(bath, {EmitterSpec::local(0.37, 4, 0.0)});
  CHECK(h0.dim() == 13);
  CHECK(h0.matrix(12, 12) == 0.37);
  CHECK(h0.matrix.row(12).head(12).cwiseAbs().maxCoeff() == 0.0);
  auto w = eigvalsh(h0.matrix);
  bool found = false;
  for (int i = 0; i < w.size(); ++i) found |= std::abs(w(i) - 0.37) < 1e-12;
  CHECK(found);

  // giant atom: exactly two non-zeros of value g in the emitter row
  EmitterSpec giant{0.0, {{0, 0.2}, {1, 0.2}}};
  auto hg = compose(bath, {giant});
  int nz = 0;
  for (int c = 0; c < 12; ++c) {
    if (hg.matrix(12, c) != 0.0) {
      ++nz;
      CHECK(hg.matrix(12, c) == 0.2);
    }
  }
  CHECK(nz == 2);

  // two local emitters
  auto h2 = compose(bath, {EmitterSpec::local(0.0, 0, 0.1),
                           EmitterSpec::local(0.0, 10, 0.1)});
  CHECK(h2.dim() == 14);
  CHECK_THROWS_AS(compose(bath, {EmitterSpec::local(0.0, 12, 0.1)}), Error);
}

TEST_CASE("self-energy basics") {
  ModelParams p;
  p.j3 = 0.8;
  p.j3p = 0.5;
  CHECK(std::abs(self_energy(p, 0.0, 0.3)) < 1e-14);
  // odd on the real axis within the gap
  const std::complex<double> sp = self_energy(p, 0.05, 0.3);
  const std::complex<double> sm = self_energy(p, -0.05, 0.3);
  CHECK(std::abs(sp + sm) < 1e-12);
  CHECK(std::abs(sp.imag()) < 1e-14);

  ModelParams broken = p;
  broken.omega_delta = 0.1;
  CHECK_THROWS_AS(self_energy(broken, 0.05, 0.3), Error);
}

TEST_CASE("self-energy matches the finite-chain eigenmode sum") {
  ModelParams p;
  p.j3 = 0.8;
  p.j3p = 0.5;
  const double g = 0.4;
  const std::complex<double> z = 1.3 + 0.01i;
  // Eq.-10 oracle: discrete sum over periodic-chain Bloch modes with
  // band weights 1/2
  const int n = 4096;
  std::complex<double> acc = 0.0;
  for (int m = 0; m < n; ++m) {
    const double k = -std::numbers::pi + 2.0 * std::numbers::pi * m / n;
    const double w = dispersion(p, k);
    acc += 0.5 / (z - w) + 0.5 / (z + w);
  }
  const std::complex<double> oracle = g * g * acc / static_cast<double>(n);
  CHECK(std::abs(self_energy(p, z, g, n) - oracle) < 1e-12);
  // and convergence of the default grid against that oracle
  CHECK(std::abs(self_energy(p, z, g) - oracle) < 1e-6);
}

TEST_CASE("lamb shift and decay curve structure") {
  ModelParams p;
  p.j3 = 0.3;  // SSH-like: no in-band VHS
  std::swap(p.j3, p.j3p);  // (1,1,0,0.3): j3=0, j3p=0.3
  p.j3 = 0.0;
  p.j3p = 0.3;
  auto scan = band_scan(p);
  CHECK(scan.vhs_energies.empty());

  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(-3.0 + 6.0 * i / 400.0);
  auto c = lamb_and_gamma(p, grid, 0.5, 1e-3);

  double gamma_min = 1e300;
  for (size_t i = 0; i < grid.size(); ++i) gamma_min = std::min(gamma_min, c.decay_rate[i]);
  CHECK(gamma_min > -1e-10);  // positivity

  // mid-gap decay is O(eta)
  auto mid = lamb_and_gamma(p, {0.0, 0.02}, 0.5, 1e-3);
  CHECK(mid.decay_rate[0] < 1e-2);
  CHECK(mid.decay_rate[1] < 1e-2);

  // odd/even symmetry of the curve
  auto sym = lamb_and_gamma(p, {0.9, -0.9, 1.7, -1.7}, 0.5, 1e-3);
  CHECK(std::abs(sym.lamb_shift[0] + sym.lamb_shift[1]) < 1e-8);
  CHECK(std::abs(sym.decay_rate[0] - sym.decay_rate[1]) < 1e-8);
  CHECK(std::abs(sym.lamb_shift[2] + sym.lamb_shift[3]) < 1e-8);
  CHECK(std::abs(sym.decay_rate[2] - sym.decay_rate[3]) < 1e-8);

  // Lamb shift diverges positive just above the upper band edge
  const double top = scan.band_max;
  auto edge = lamb_and_gamma(p, {top + 1e-4, top + 1e-2}, 0.5, 1e-5, 1 << 18);
  CHECK(edge.lamb_shift[0] > edge.lamb_shift[1]);
  CHECK(edge.lamb_shift[0] > 1.0);
}

TEST_CASE("in-band VHS produces an extra decay peak") {
  ModelParams p;
  p.j3 = 2.0;
  p.j3p = 4.0;
  auto scan = band_scan(p);
  REQUIRE(!scan.vhs_energies.empty());
  const double vhs = scan.vhs_energies.back();  // approx 5.03
  auto c = lamb_and_gamma(p, {vhs, vhs - 0.4, vhs + 0.4}, 0.3, 1e-3);
  CHECK(c.decay_rate[0] > 2.0 * c.decay_rate[1]);
  CHECK(c.decay_rate[0] > 2.0 * c.decay_rate[2]);
}

TEST_CASE("eta-halving convergence away from singular points") {
  ModelParams p;
  p.j3 = 0.8;
  p.j3p = 0.5;
  const double mid_band = 1.7;  // inside the upper band, away from edges
  auto a = lamb_and_gamma(p, {mid_band}, 0.3, 1e-3, 1 << 18);
  auto b = lamb_and_gamma(p, {mid_band}, 0.3, 5e-4, 1 << 18);
  CHECK(std::abs(a.decay_rate[0] - b.decay_rate[0]) <
        0.01 * std::abs(a.decay_rate[0]));
}
