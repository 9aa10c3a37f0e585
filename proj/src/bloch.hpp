#pragma once

#include <complex>
#include <vector>

#include "types.hpp"

namespace essh {

struct BlochVector {
  double dx, dy, dz;
  double k;
};

struct BandScan {
  std::vector<double> k_grid;
  std::vector<double> omega_upper;
  std::vector<double> omega_lower;
  double gap_width;
  double band_min;  // lower edge of the upper band
  double band_max;  // upper edge of the upper band
  std::vector<double> vhs_energies;  // in-band critical energies, ascending
};

BlochVector bloch_vector(const ModelParams& p, double k);
double dispersion(const ModelParams& p, double k);

// h(k) = dx - i*dy = J1' + J1 e^{-ik} + J3' e^{ik} + J3 e^{-2ik}; the chiral
// off-diagonal element whose phase winding defines W.
std::complex<double> off_diagonal_h(const ModelParams& p, double k);

double min_dispersion(const ModelParams& p, int n_k);
bool is_gapless(const ModelParams& p, int n_k = 8192);

// Accumulated wrapped phase increment of arg h(k) over the BZ, divided by
// -2pi.  Requires a chiral (omega_delta=0), gapped model; refines the grid
// until the integer residual is below 1e-6.
int winding_number(const ModelParams& p, int n_k = 4096);

BandScan band_scan(const ModelParams& p, int n_k = 4096);

}  // namespace essh
