#pragma once

#include <string>
#include <vector>

#include "psfcdl/dict_updater.hpp"
#include "psfcdl/grid.hpp"
#include "psfcdl/sparse_coder.hpp"

namespace psfcdl {

enum class Shape { narrow, wide, elong, complex_blend };

Shape shape_from_string(const std::string& name);
std::string to_string(Shape shape);

struct CdlParams {
  int offsets_per_axis = 5;   // M
  int lanczos_order = 5;      // K
  double lambda_a = 0.01;     // sparsity weight
  double lambda_g = 0.1;      // smoothness weight
  double rho_a = 1.0;         // ADMM penalty
  double inv_step = 100.0;    // L_g
  double sigma0 = 0.5;        // init Gaussian width, px
  int warmup_iters = 10;      // N_iter,0 (each warm-up loop)
  int main_iters = 100;       // N_iter
  int support = 25;           // PSF support P, odd
  bool coeff_nonneg = false;
  int inner_admm = 1;         // ADMM iterations per sparse-coding call
  int inner_fista = 1;        // FISTA iterations per dictionary-update call
  bool cold_start = false;    // reset solver state every outer iteration
  // Input samples are multiplied by a working scale before solving; the
  // regularization weights are calibrated against data of order one. When
  // normalize_target > 0 the scale is chosen per input as
  // normalize_target / rms(s - mean(s)), which is exposure-invariant and
  // insensitive to the DC background; otherwise input_scale is used as-is.
  double input_scale = 1.0 / 65535.0;
  double normalize_target = 0.0;

  void validate() const;
};

// Appendix-style parameter rule: M, iteration counts fixed; K and sigma0 by
// shape; the regularization and step parameters by star density (pixels per
// star), snapped to the nearest anchor in {1, 10, 25, 50, 100}.
CdlParams params_for(Shape shape, int density);

PsfKernel init_psf(double sigma0, int support);

struct EstimationResult {
  PsfKernel psf;
  CoefficientMaps coeffs;
  std::vector<double> objective_trace;  // one entry per outer iteration
  std::vector<char> trace_phase;        // 'a' coding, 'g' update, 'm' main
  double sparse_seconds = 0.0;
  double dict_seconds = 0.0;
  double total_seconds = 0.0;
};

// The full alternating-minimization driver: sparse-coding warm-up,
// dictionary warm-up, then the main alternating loop.
EstimationResult run_cdl(const RealGrid& s, const CdlParams& params);

}  // namespace psfcdl
