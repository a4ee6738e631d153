#pragma once

#include "psfcdl/grid.hpp"

namespace psfcdl {

// DFT convention, fixed repo-wide: unnormalized forward, 1/N inverse.
ComplexGrid forward_dft(const RealGrid& x);
ComplexGrid forward_dft(const ComplexGrid& x);
ComplexGrid inverse_dft(const ComplexGrid& spec);

// Inverse transform of a (conjugate-symmetric) spectrum, real part only.
RealGrid inverse_dft_real(const ComplexGrid& spec);

// Periodic convolution via DFT product. x and k must have equal dimensions.
RealGrid circular_convolve(const RealGrid& x, const RealGrid& k);

// Zero the (0,0) frequency bin; all other bins unchanged.
ComplexGrid zero_dc(ComplexGrid spec);

// 0.5 * ||r||_W^2 with the DC-masked weighting, computed spatially as
// 0.5 * ||r - mean(r)||_2^2.
double weighted_fidelity(const RealGrid& residual);

}  // namespace psfcdl
