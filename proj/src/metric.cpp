#include "psfcdl/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace psfcdl {
namespace {

// Reference samples on the support lattice shifted by (dr, dc) px; lattice
// index (0, 0) is the kernel's center sample.
RealGrid sample_reference(const ReferencePsf& reference, int support,
                          double dr, double dc) {
  const int half = (support - 1) / 2;
  RealGrid g(support, support);
  for (int r = -half; r <= half; ++r)
    for (int c = -half; c <= half; ++c)
      g(r + half, c + half) = reference.evaluate(c + dc, r + dr);
  return g;
}

double corr_at(const RealGrid& h, const RealGrid& g) {
  double hh = h.square().sum();
  double gg = g.square().sum();
  if (hh <= 0.0 || gg <= 0.0)
    throw std::invalid_argument("correlation: zero-norm operand");
  return (h * g).sum() / (std::sqrt(hh) * std::sqrt(gg));
}

}  // namespace

double correlation(const ReferencePsf& reference, const PsfKernel& kernel,
                   int row_offset, int col_offset, int resolution) {
  if (resolution < 1) throw std::invalid_argument("correlation: resolution < 1");
  RealGrid g = sample_reference(reference, kernel.support_size,
                                static_cast<double>(row_offset) / resolution,
                                static_cast<double>(col_offset) / resolution);
  return corr_at(kernel.values, g);
}

MetricResult evaluate_psf(const ReferencePsf& reference,
                          const PsfKernel& kernel, int resolution) {
  const int support = kernel.support_size;
  const int half = (support - 1) / 2;
  const RealGrid& h = kernel.values;
  if (h.square().sum() <= 0.0)
    throw std::invalid_argument("evaluate_psf: zero-norm kernel");

  // Coarse alignment over whole-pixel shifts.
  int best_ir = 0, best_ic = 0;
  double best = -2.0;
  for (int dr = -half; dr <= half; ++dr) {
    for (int dc = -half; dc <= half; ++dc) {
      double c = corr_at(h, sample_reference(reference, support, dr, dc));
      if (c > best) {
        best = c;
        best_ir = dr;
        best_ic = dc;
      }
    }
  }

  // Sub-pixel refinement around the coarse alignment.
  int best_nr = 0, best_nc = 0;
  best = -2.0;
  for (int nr = -resolution / 2; nr <= resolution / 2; ++nr) {
    for (int nc = -resolution / 2; nc <= resolution / 2; ++nc) {
      double dr = best_ir + static_cast<double>(nr) / resolution;
      double dc = best_ic + static_cast<double>(nc) / resolution;
      double c = corr_at(h, sample_reference(reference, support, dr, dc));
      if (c > best) {
        best = c;
        best_nr = nr;
        best_nc = nc;
      }
    }
  }

  MetricResult res;
  res.best_row_offset = best_ir * resolution + best_nr;
  res.best_col_offset = best_ic * resolution + best_nc;
  res.correlation = best;

  RealGrid g = sample_reference(
      reference, support, static_cast<double>(res.best_row_offset) / resolution,
      static_cast<double>(res.best_col_offset) / resolution);
  double hh = h.square().sum();
  double gh = (g * h).sum();
  if (gh == 0.0) throw std::runtime_error("evaluate_psf: degenerate alignment");
  res.scale = hh / gh;
  double resid = (h - res.scale * g).square().sum();
  if (resid <= hh * 1e-10)
    res.snr_db = 100.0;
  else
    res.snr_db = std::min(100.0, 10.0 * std::log10(hh / resid));
  return res;
}

}  // namespace psfcdl
