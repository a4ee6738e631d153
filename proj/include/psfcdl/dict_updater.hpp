#pragma once

#include <optional>
#include <vector>

#include "psfcdl/grid.hpp"
#include "psfcdl/lanczos.hpp"
#include "psfcdl/sparse_coder.hpp"

namespace psfcdl {

// The PSF estimate on its bounded support: non-negative, unit l2 norm.
struct PsfKernel {
  int support_size = 0;  // odd P
  RealGrid values;       // P x P
};

struct FistaState {
  RealGrid estimate;        // g iterate, full image grid
  RealGrid momentum_point;  // y iterate, full image grid
  double t = 1.0;
  double step_scale = 1.0;  // 1 / L_g, upper bound on the step
  double last_step = 0.0;   // accepted backtracking step, 0 before first use
};

// b = sum_{m,n} (h_m (x) h_n) * a_{m,n}: the image-sized kernel against
// which g is deconvolved.
RealGrid effective_kernel(const CoefficientMaps& coeffs,
                          const OffsetFilterBank& bank);

// Gradient of 0.5 ||b * y - s||_W^2 with respect to y. DC bins of the b and
// s spectra are zeroed before the gradient evaluation.
RealGrid fidelity_gradient(const RealGrid& y, const RealGrid& b,
                           const RealGrid& s);

// Gradient of (lambda_g / 2) (||c0 * y||^2 + ||c1 * y||^2) with c0, c1 the
// periodic 2-tap forward differences along rows and columns.
RealGrid smoothness_gradient(const RealGrid& y, double lambda_g);

// Projection onto the constraint set: zero outside the centered P x P
// support window (the grid origin is the window center, wrapping), negatives
// clipped, then scaled to unit l2 norm. A degenerate all-zero result falls
// back to `fallback` when given.
PsfKernel project_constraint(const RealGrid& y, int support_size,
                             const std::optional<PsfKernel>& fallback = {});

// Extract / embed the support window relative to the grid origin.
RealGrid crop_support(const RealGrid& full, int support_size);

// One FISTA step: proximal gradient at the momentum point, then the
// momentum-scalar recursion t <- (1 + sqrt(1 + 4 t^2)) / 2 and the iterate
// extrapolation.
void fista_step(FistaState& state, const RealGrid& b, const RealGrid& s,
                double lambda_g, int support_size,
                const std::optional<PsfKernel>& fallback = {});

// Standalone dictionary update: `iters` FISTA steps from `init`.
PsfKernel dict_update(const RealGrid& b, const RealGrid& s, double lambda_g,
                      double inv_step /* L_g */, const PsfKernel& init,
                      int iters);

}  // namespace psfcdl
