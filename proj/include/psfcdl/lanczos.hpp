#pragma once

#include <vector>

#include "psfcdl/grid.hpp"

namespace psfcdl {

// Windowed-sinc interpolation kernel: sinc(x) * sinc(x/order) on
// (-order, order), zero outside.
double lanczos_kernel(double x, int order);

// The M fractional-offset interpolation filters. Filter m has taps
// phi(j + delta_m) for j in [-order, order], so convolving a sampled signal
// with it resamples the underlying function at x + delta_m.
struct OffsetFilterBank {
  int order = 0;                 // Lanczos order K
  int count = 0;                 // number of offsets M
  std::vector<double> offsets;   // delta_m = n/M, n in [-floor((M-1)/2), floor(M/2)]
  std::vector<Eigen::VectorXd> taps;  // each of length 2*order+1
};

OffsetFilterBank build_filter_bank(int count, int order);

// Full 2D convolution of g with the separable (h_m (x) h_n) tap filter;
// output support grows by 2*order per dimension. Row offset m, column
// offset n.
RealGrid shift_kernel(const RealGrid& g, const OffsetFilterBank& bank, int m,
                      int n);

// All M^2 shifted filters, index (m, n) -> m * M + n.
std::vector<RealGrid> shift_dictionary(const RealGrid& g,
                                       const OffsetFilterBank& bank);

// Zero-embed a small kernel into a rows x cols grid with its center tap at
// (0, 0), negative coordinates wrapping around. The kernel's center is its
// middle sample (odd sizes assumed).
RealGrid embed_kernel(const RealGrid& kernel, Eigen::Index rows,
                      Eigen::Index cols);

}  // namespace psfcdl
