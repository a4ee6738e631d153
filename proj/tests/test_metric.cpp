#include <doctest.h>

#include <cmath>
#include <random>

#include "psfcdl/metric.hpp"

using namespace psfcdl;

namespace {

// Kernel sampled from the reference with the metric's lattice convention:
// entry (r, c) holds the value at (x, y) = (c + dc, r + dr).
PsfKernel sampled_kernel(const ReferencePsf& ref, int support, double dr,
                         double dc, double scale = 1.0) {
  const int half = (support - 1) / 2;
  PsfKernel k{support, RealGrid(support, support)};
  for (int r = -half; r <= half; ++r)
    for (int c = -half; c <= half; ++c)
      k.values(r + half, c + half) = scale * ref.evaluate(c + dc, r + dr);
  return k;
}

}  // namespace

TEST_CASE("exact samples score the SNR cap") {
  ReferencePsf ref = make_reference_psf(Shape::narrow);
  PsfKernel k = sampled_kernel(ref, 25, 0.0, 0.0);
  MetricResult res = evaluate_psf(ref, k);
  CHECK(res.snr_db == 100.0);
  CHECK(res.best_row_offset == 0);
  CHECK(res.best_col_offset == 0);
  CHECK(res.correlation == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.scale == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("the metric is scale invariant") {
  ReferencePsf ref = make_reference_psf(Shape::wide);
  PsfKernel k = sampled_kernel(ref, 25, 0.06, -0.04);
  // Mild perturbation so the SNR is informative rather than capped.
  std::mt19937 rng(5);
  std::normal_distribution<double> g(0.0, 1e-4);
  for (Eigen::Index i = 0; i < k.values.size(); ++i) k.values.data()[i] += g(rng);

  MetricResult base = evaluate_psf(ref, k);
  PsfKernel scaled = k;
  scaled.values *= 2.7;
  MetricResult res = evaluate_psf(ref, scaled);
  CHECK(res.snr_db == doctest::Approx(base.snr_db).epsilon(1e-9));
  CHECK(res.best_row_offset == base.best_row_offset);
  CHECK(res.best_col_offset == base.best_col_offset);
  CHECK(res.scale == doctest::Approx(2.7 * base.scale).epsilon(1e-9));
}

TEST_CASE("a quarter-pixel shift is located on the search lattice") {
  ReferencePsf ref = make_reference_psf(Shape::narrow);
  PsfKernel k = sampled_kernel(ref, 25, 0.26, 0.0);
  MetricResult res = evaluate_psf(ref, k, 50);
  CHECK(std::abs(res.best_row_offset - 13) <= 1);
  CHECK(std::abs(res.best_col_offset) <= 1);
  CHECK(res.snr_db == 100.0);
}

TEST_CASE("a known residual energy ratio maps to the expected dB") {
  ReferencePsf ref = make_reference_psf(Shape::narrow);
  PsfKernel k = sampled_kernel(ref, 25, 0.0, 0.0);
  RealGrid g0 = k.values;

  std::mt19937 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealGrid w(25, 25);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = gauss(rng);
  // Orthogonalize against the signal and set the energy ratio to 1e-3.
  w -= (w * g0).sum() / g0.square().sum() * g0;
  w *= std::sqrt(1e-3 * g0.square().sum() / w.square().sum());

  k.values = g0 + w;
  MetricResult res = evaluate_psf(ref, k);
  CHECK(res.snr_db == doctest::Approx(30.0).epsilon(0.5 / 30.0));
}

TEST_CASE("reported correlation is optimal over the search lattice") {
  ReferencePsf ref = make_reference_psf(Shape::elong);
  PsfKernel k = sampled_kernel(ref, 25, 0.31, -0.18);
  std::mt19937 rng(13);
  std::normal_distribution<double> gauss(0.0, 2e-4);
  for (Eigen::Index i = 0; i < k.values.size(); ++i)
    k.values.data()[i] += gauss(rng);

  MetricResult res = evaluate_psf(ref, k, 50);
  for (int dr = -25; dr <= 25; dr += 5)
    for (int dc = -25; dc <= 25; dc += 5)
      CHECK(res.correlation >= correlation(ref, k, dr, dc, 50) - 1e-12);
  CHECK(res.correlation ==
        doctest::Approx(correlation(ref, k, res.best_row_offset,
                                    res.best_col_offset, 50)));
}

TEST_CASE("transpose symmetry for circular references") {
  ReferencePsf ref = make_reference_psf(Shape::narrow);
  PsfKernel k = sampled_kernel(ref, 25, 0.14, 0.05);
  std::mt19937 rng(17);
  std::normal_distribution<double> gauss(0.0, 1e-4);
  RealGrid noise(25, 25);
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise.data()[i] = gauss(rng);
  // Symmetric perturbation keeps the transposed problem identical.
  k.values += noise + noise.transpose();

  PsfKernel kt = k;
  kt.values = k.values.transpose().eval();
  MetricResult a = evaluate_psf(ref, k);
  MetricResult b = evaluate_psf(ref, kt);
  CHECK(a.snr_db == doctest::Approx(b.snr_db).epsilon(1e-9));
  CHECK(a.best_row_offset == b.best_col_offset);
  CHECK(a.best_col_offset == b.best_row_offset);
}

TEST_CASE("degenerate kernels are handled") {
  ReferencePsf ref = make_reference_psf(Shape::narrow);
  PsfKernel flat{9, RealGrid::Constant(9, 9, 1.0)};
  MetricResult res = evaluate_psf(ref, flat);
  CHECK(std::isfinite(res.snr_db));
  CHECK(res.snr_db < 20.0);

  PsfKernel zero{9, RealGrid::Zero(9, 9)};
  CHECK_THROWS_AS(evaluate_psf(ref, zero), std::invalid_argument);
  CHECK_THROWS_AS(correlation(ref, flat, 0, 0, 0), std::invalid_argument);
}
