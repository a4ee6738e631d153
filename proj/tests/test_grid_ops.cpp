#include <doctest.h>

#include <complex>
#include <numbers>
#include <random>

#include "psfcdl/fft.hpp"

using namespace psfcdl;

namespace {

RealGrid random_grid(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealGrid g(rows, cols);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = u(rng);
  return g;
}

// Direct O(N^2) DFT, the independent oracle for the FFT path.
ComplexGrid direct_dft(const RealGrid& x) {
  using namespace std::complex_literals;
  const Eigen::Index rows = x.rows(), cols = x.cols();
  ComplexGrid out(rows, cols);
  for (Eigen::Index kr = 0; kr < rows; ++kr) {
    for (Eigen::Index kc = 0; kc < cols; ++kc) {
      std::complex<double> acc = 0.0;
      for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
          double phase = -2.0 * std::numbers::pi *
                         (double(kr * r) / rows + double(kc * c) / cols);
          acc += x(r, c) * std::exp(1i * phase);
        }
      out(kr, kc) = acc;
    }
  }
  return out;
}

// Direct wrap-around double sum.
RealGrid direct_circular_convolve(const RealGrid& x, const RealGrid& k) {
  const Eigen::Index rows = x.rows(), cols = x.cols();
  RealGrid out = RealGrid::Zero(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
          out(r, c) += x(i, j) * k((r - i + rows) % rows, (c - j + cols) % cols);
  return out;
}

}  // namespace

TEST_CASE("forward_dft basics") {
  RealGrid zero = RealGrid::Zero(4, 4);
  CHECK(forward_dft(zero).abs().maxCoeff() == 0.0);

  RealGrid impulse = RealGrid::Zero(4, 4);
  impulse(0, 0) = 1.0;
  ComplexGrid spec = forward_dft(impulse);
  CHECK((spec - 1.0).abs().maxCoeff() < 1e-12);

  RealGrid x = random_grid(4, 4, 1);
  ComplexGrid oracle = direct_dft(x);
  CHECK((forward_dft(x) - oracle).abs().maxCoeff() < 1e-10);
}

TEST_CASE("round trip identity") {
  for (Eigen::Index n : {3, 8, 17, 64}) {
    RealGrid x = random_grid(n, n, static_cast<unsigned>(n));
    RealGrid back = inverse_dft_real(forward_dft(x));
    CHECK((back - x).abs().maxCoeff() < 1e-10 * x.abs().maxCoeff());
  }
}

TEST_CASE("circular convolution") {
  RealGrid x = random_grid(5, 5, 2);

  RealGrid delta = RealGrid::Zero(5, 5);
  delta(0, 0) = 1.0;
  CHECK((circular_convolve(x, delta) - x).abs().maxCoeff() < 1e-12);

  RealGrid shifted = RealGrid::Zero(5, 5);
  shifted(1, 2) = 1.0;
  RealGrid conv = circular_convolve(x, shifted);
  for (Eigen::Index r = 0; r < 5; ++r)
    for (Eigen::Index c = 0; c < 5; ++c)
      CHECK(conv(r, c) == doctest::Approx(x((r + 4) % 5, (c + 3) % 5)).epsilon(1e-10));

  RealGrid k = random_grid(5, 5, 3);
  CHECK((circular_convolve(x, k) - direct_circular_convolve(x, k))
            .abs()
            .maxCoeff() < 1e-10);

  CHECK_THROWS_AS(circular_convolve(x, RealGrid::Zero(4, 4)),
                  std::invalid_argument);
}

TEST_CASE("convolution theorem on small grids") {
  for (Eigen::Index n : {2, 5, 8}) {
    RealGrid x = random_grid(n, n, static_cast<unsigned>(10 + n));
    RealGrid k = random_grid(n, n, static_cast<unsigned>(20 + n));
    CHECK((circular_convolve(x, k) - direct_circular_convolve(x, k))
              .abs()
              .maxCoeff() < 1e-10);
  }
}

TEST_CASE("zero_dc") {
  RealGrid constant = RealGrid::Constant(6, 6, 3.7);
  CHECK(zero_dc(forward_dft(constant)).abs().maxCoeff() < 1e-10);

  RealGrid x = random_grid(6, 6, 4);
  RealGrid zero_mean = x - x.mean();
  ComplexGrid spec = forward_dft(zero_mean);
  CHECK((zero_dc(spec) - spec).abs().maxCoeff() < 1e-9);

  for (double c : {-2.0, 0.5, 1000.0}) {
    ComplexGrid a = zero_dc(forward_dft(x));
    ComplexGrid b = zero_dc(forward_dft(RealGrid(x + c)));
    CHECK((a - b).abs().maxCoeff() < 1e-9 * (1.0 + std::abs(c)));
  }
}

TEST_CASE("weighted_fidelity") {
  CHECK(weighted_fidelity(RealGrid::Constant(4, 4, 12.5)) == 0.0);

  RealGrid r = random_grid(4, 4, 5);
  r -= r.mean();
  CHECK(weighted_fidelity(r) ==
        doctest::Approx(0.5 * r.square().sum()).epsilon(1e-12));

  RealGrid x = random_grid(4, 4, 6);
  double oracle = 0.5 * (x - x.mean()).square().sum();
  CHECK(weighted_fidelity(x) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("DC invariance of the masked fidelity") {
  RealGrid x = random_grid(8, 8, 7);
  RealGrid k = random_grid(8, 8, 8);
  RealGrid s = random_grid(8, 8, 9);
  double base = weighted_fidelity(circular_convolve(x, k) - s);
  for (double c : {-5.0, 0.1, 300.0}) {
    RealGrid with_offset = circular_convolve(x, k) + c - s;
    CHECK(weighted_fidelity(with_offset) ==
          doctest::Approx(base).epsilon(1e-10));
  }
}
