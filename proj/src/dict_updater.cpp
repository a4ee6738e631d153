#include "psfcdl/dict_updater.hpp"

#include <cmath>
#include <stdexcept>

#include "psfcdl/fft.hpp"

namespace psfcdl {
namespace {

Eigen::Index wrap(Eigen::Index i, Eigen::Index n) { return ((i % n) + n) % n; }

// (lambda_g / 2) sum of squared periodic forward differences.
double smoothness_value(const RealGrid& g, double lambda_g) {
  if (lambda_g == 0.0) return 0.0;
  const Eigen::Index rows = g.rows(), cols = g.cols();
  double acc = 0.0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double dr = g((r + 1) % rows, c) - g(r, c);
      double dc = g(r, (c + 1) % cols) - g(r, c);
      acc += dr * dr + dc * dc;
    }
  }
  return 0.5 * lambda_g * acc;
}

}  // namespace

RealGrid effective_kernel(const CoefficientMaps& coeffs,
                          const OffsetFilterBank& bank) {
  if (coeffs.maps.empty())
    throw std::invalid_argument("effective_kernel: empty coefficients");
  const Eigen::Index rows = coeffs.maps[0].rows();
  const Eigen::Index cols = coeffs.maps[0].cols();
  const int count = bank.count;
  ComplexGrid bhat = ComplexGrid::Zero(rows, cols);
  for (int m = 0; m < count; ++m) {
    for (int n = 0; n < count; ++n) {
      RealGrid tap2d =
          (bank.taps[m] * bank.taps[n].transpose()).array();  // separable 2D taps
      ComplexGrid hhat = forward_dft(embed_kernel(tap2d, rows, cols));
      bhat += hhat * forward_dft(coeffs.maps[static_cast<size_t>(m) * count + n]);
    }
  }
  return inverse_dft_real(bhat);
}

RealGrid fidelity_gradient(const RealGrid& y, const RealGrid& b,
                           const RealGrid& s) {
  ComplexGrid bhat = zero_dc(forward_dft(b));
  ComplexGrid shat = zero_dc(forward_dft(s));
  ComplexGrid rhat = bhat * forward_dft(y) - shat;
  return inverse_dft_real(ComplexGrid(bhat.conjugate() * rhat));
}

RealGrid smoothness_gradient(const RealGrid& y, double lambda_g) {
  if (lambda_g == 0.0) return RealGrid::Zero(y.rows(), y.cols());
  // lambda_g * (c0^T * c0 + c1^T * c1) * y with periodic 2-tap forward
  // differences; the composed filter is the 5-point Laplacian stencil.
  const Eigen::Index rows = y.rows(), cols = y.cols();
  RealGrid out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double lap = 4.0 * y(r, c) - y(wrap(r - 1, rows), c) -
                   y(wrap(r + 1, rows), c) - y(r, wrap(c - 1, cols)) -
                   y(r, wrap(c + 1, cols));
      out(r, c) = lambda_g * lap;
    }
  }
  return out;
}

RealGrid crop_support(const RealGrid& full, int support_size) {
  const Eigen::Index half = (support_size - 1) / 2;
  RealGrid out(support_size, support_size);
  for (Eigen::Index r = -half; r <= half; ++r)
    for (Eigen::Index c = -half; c <= half; ++c)
      out(r + half, c + half) =
          full(wrap(r, full.rows()), wrap(c, full.cols()));
  return out;
}

PsfKernel project_constraint(const RealGrid& y, int support_size,
                             const std::optional<PsfKernel>& fallback) {
  if (support_size % 2 == 0 || support_size < 1)
    throw std::invalid_argument("project_constraint: support must be odd");
  if (support_size > y.rows() || support_size > y.cols())
    throw std::invalid_argument("project_constraint: support exceeds grid");
  RealGrid clipped = crop_support(y, support_size).max(0.0);
  double norm = std::sqrt(clipped.square().sum());
  if (norm <= 0.0) {
    if (fallback) return *fallback;
    throw std::runtime_error("project_constraint: degenerate zero projection");
  }
  return PsfKernel{support_size, RealGrid(clipped / norm)};
}

void fista_step(FistaState& state, const RealGrid& b, const RealGrid& s,
                double lambda_g, int support_size,
                const std::optional<PsfKernel>& fallback) {
  if (state.step_scale <= 0.0)
    throw std::invalid_argument("fista_step: step scale must be positive");
  ComplexGrid bhat = zero_dc(forward_dft(b));
  ComplexGrid shat = zero_dc(forward_dft(s));
  ComplexGrid rhat = bhat * forward_dft(state.momentum_point) - shat;
  RealGrid grad = inverse_dft_real(ComplexGrid(bhat.conjugate() * rhat)) +
                  smoothness_gradient(state.momentum_point, lambda_g);
  // Smooth part of the objective at the momentum point; the residual
  // spectrum has zero DC so Parseval gives the mean-removed fidelity.
  const double inv_n =
      1.0 / static_cast<double>(state.momentum_point.size());
  double f_y = 0.5 * inv_n * rhat.abs2().sum() +
               smoothness_value(state.momentum_point, lambda_g);

  // Backtracking line search. The gradient's Lipschitz constant on crowded
  // fields dwarfs the configured 1 / step_scale, so a fixed step diverges;
  // halve from the previous accepted step until the quadratic majorizer
  // holds, never exceeding the configured step.
  double step = state.last_step > 0.0
                    ? std::min(state.step_scale, 4.0 * state.last_step)
                    : state.step_scale;
  RealGrid g_new;
  for (int tries = 0; tries < 80; ++tries) {
    RealGrid stepped = state.momentum_point - step * grad;
    PsfKernel proj = project_constraint(stepped, support_size, fallback);
    g_new = embed_kernel(proj.values, state.momentum_point.rows(),
                         state.momentum_point.cols());
    RealGrid diff = g_new - state.momentum_point;
    ComplexGrid rhat_new = bhat * forward_dft(g_new) - shat;
    double f_new =
        0.5 * inv_n * rhat_new.abs2().sum() + smoothness_value(g_new, lambda_g);
    double quad = f_y + (grad * diff).sum() +
                  0.5 / step * diff.square().sum();
    if (f_new <= quad + 1e-12 * std::abs(quad) + 1e-300) break;
    step *= 0.5;
  }
  state.last_step = step;

  // Gradient-based adaptive restart: when the momentum direction opposes
  // the latest step, drop the accumulated momentum instead of overshooting.
  if (((state.momentum_point - g_new) * (g_new - state.estimate)).sum() > 0.0)
    state.t = 1.0;
  double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * state.t * state.t));
  double beta = (state.t - 1.0) / t_next;
  RealGrid y_new = g_new + beta * (g_new - state.estimate);
  state.estimate = std::move(g_new);
  state.momentum_point = std::move(y_new);
  state.t = t_next;
}

PsfKernel dict_update(const RealGrid& b, const RealGrid& s, double lambda_g,
                      double inv_step, const PsfKernel& init, int iters) {
  if (inv_step <= 0.0) throw std::invalid_argument("dict_update: L_g <= 0");
  FistaState state;
  state.estimate = embed_kernel(init.values, s.rows(), s.cols());
  state.momentum_point = state.estimate;
  state.t = 1.0;
  state.step_scale = 1.0 / inv_step;
  for (int i = 0; i < iters; ++i) {
    fista_step(state, b, s, lambda_g, init.support_size, init);
    if (!state.estimate.isFinite().all())
      throw std::runtime_error("dict_update: non-finite iterate");
  }
  if (iters == 0) return init;
  return project_constraint(state.estimate, init.support_size, init);
}

}  // namespace psfcdl
