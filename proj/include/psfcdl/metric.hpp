#pragma once

#include "psfcdl/dict_updater.hpp"
#include "psfcdl/simulate.hpp"

namespace psfcdl {

struct MetricResult {
  double snr_db = 0.0;      // capped at 100
  int best_row_offset = 0;  // total offset in units of 1/N_R px
  int best_col_offset = 0;
  double scale = 0.0;       // fitted a = h'h / g'h
  double correlation = 0.0;
};

// Normalized cross-correlation between the kernel samples and the continuous
// reference evaluated on the support lattice shifted by
// (row_offset / resolution, col_offset / resolution) px.
double correlation(const ReferencePsf& reference, const PsfKernel& kernel,
                   int row_offset, int col_offset, int resolution);

// Full metric: coarse integer alignment by discrete cross-correlation, then
// exhaustive sub-pixel search over [-resolution/2, resolution/2]^2, then the
// scale-optimal SNR in dB.
MetricResult evaluate_psf(const ReferencePsf& reference,
                          const PsfKernel& kernel, int resolution = 50);

}  // namespace psfcdl
