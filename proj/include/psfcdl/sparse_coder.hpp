#pragma once

#include <vector>

#include "psfcdl/fft.hpp"
#include "psfcdl/grid.hpp"

namespace psfcdl {

// The M^2 coefficient maps, each the image's dimensions. Map index
// m * count + n corresponds to row offset m, column offset n of the filter
// bank.
struct CoefficientMaps {
  int offsets_per_axis = 0;  // M; maps.size() == M^2
  std::vector<RealGrid> maps;

  static CoefficientMaps zeros(int offsets_per_axis, Eigen::Index rows,
                               Eigen::Index cols);
  double abs_sum() const;
  double sq_norm() const;
};

struct AdmmState {
  CoefficientMaps primary;    // a
  CoefficientMaps auxiliary;  // u
  CoefficientMaps dual;       // v
  double rho = 1.0;
  double primal_residual = 0.0;  // relative, after the latest iteration
  double dual_residual = 0.0;

  static AdmmState zeros(int offsets_per_axis, Eigen::Index rows,
                         Eigen::Index cols, double rho);
};

// Exact minimizer of the quadratic ADMM x-step for single-image CSC,
// computed per frequency bin via the rank-one (Sherman-Morrison) solve.
// dict_spectra and s_spectrum must already be DC-masked.
CoefficientMaps csc_x_step(const AdmmState& state,
                           const std::vector<ComplexGrid>& dict_spectra,
                           const ComplexGrid& s_spectrum);

// One full ADMM iteration (x-step, l1-l2 prox, dual ascent) in place.
// lambda_a is the sparsity weight; the prox threshold is lambda_a / rho.
// With nonneg set, negative entries are clipped before the prox.
void admm_iterate(AdmmState& state,
                  const std::vector<ComplexGrid>& dict_spectra,
                  const ComplexGrid& s_spectrum, double lambda_a,
                  bool nonneg = false);

// Standalone CSC solve: iterates ADMM until both relative residuals fall
// below tol or max_iter is reached; returns the auxiliary (sparse) block.
CoefficientMaps csc_solve(const RealGrid& s,
                          const std::vector<RealGrid>& dict_filters,
                          double lambda_a, double rho_a, int max_iter,
                          double tol, bool nonneg = false);

}  // namespace psfcdl
