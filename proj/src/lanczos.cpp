#include "psfcdl/lanczos.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psfcdl {
namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Full (size-growing) 1D convolution along rows or columns.
RealGrid convolve_axis(const RealGrid& x, const Eigen::VectorXd& taps,
                       bool along_rows) {
  const Eigen::Index half = (taps.size() - 1) / 2;
  RealGrid out;
  if (along_rows) {
    out = RealGrid::Zero(x.rows() + 2 * half, x.cols());
    for (Eigen::Index j = 0; j < taps.size(); ++j)
      out.block(j, 0, x.rows(), x.cols()) += taps[j] * x;
  } else {
    out = RealGrid::Zero(x.rows(), x.cols() + 2 * half);
    for (Eigen::Index j = 0; j < taps.size(); ++j)
      out.block(0, j, x.rows(), x.cols()) += taps[j] * x;
  }
  return out;
}

}  // namespace

double lanczos_kernel(double x, int order) {
  if (order < 1) throw std::invalid_argument("lanczos_kernel: order < 1");
  if (x <= -order || x >= order) return 0.0;
  return sinc(x) * sinc(x / order);
}

OffsetFilterBank build_filter_bank(int count, int order) {
  if (count < 1 || order < 1)
    throw std::invalid_argument("build_filter_bank: count and order >= 1");
  OffsetFilterBank bank;
  bank.order = order;
  bank.count = count;
  const int lo = -((count - 1) / 2);
  const int hi = count / 2;
  for (int n = lo; n <= hi; ++n) {
    double delta = static_cast<double>(n) / count;
    bank.offsets.push_back(delta);
    Eigen::VectorXd taps(2 * order + 1);
    for (int j = -order; j <= order; ++j)
      taps[j + order] = lanczos_kernel(j + delta, order);
    // The zero-offset filter must be the exact impulse, not one polluted by
    // rounding in sinc at integer points.
    if (n == 0) {
      taps.setZero();
      taps[order] = 1.0;
    }
    bank.taps.push_back(std::move(taps));
  }
  return bank;
}

RealGrid shift_kernel(const RealGrid& g, const OffsetFilterBank& bank, int m,
                      int n) {
  RealGrid rows_done = convolve_axis(g, bank.taps.at(m), true);
  return convolve_axis(rows_done, bank.taps.at(n), false);
}

std::vector<RealGrid> shift_dictionary(const RealGrid& g,
                                       const OffsetFilterBank& bank) {
  std::vector<RealGrid> filters;
  filters.reserve(static_cast<size_t>(bank.count) * bank.count);
  for (int m = 0; m < bank.count; ++m)
    for (int n = 0; n < bank.count; ++n)
      filters.push_back(shift_kernel(g, bank, m, n));
  return filters;
}

RealGrid embed_kernel(const RealGrid& kernel, Eigen::Index rows,
                      Eigen::Index cols) {
  if (kernel.rows() > rows || kernel.cols() > cols)
    throw std::invalid_argument("embed_kernel: kernel larger than grid");
  RealGrid out = RealGrid::Zero(rows, cols);
  const Eigen::Index cr = (kernel.rows() - 1) / 2;
  const Eigen::Index cc = (kernel.cols() - 1) / 2;
  for (Eigen::Index r = 0; r < kernel.rows(); ++r) {
    Eigen::Index rr = ((r - cr) % rows + rows) % rows;
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
      Eigen::Index cc2 = ((c - cc) % cols + cols) % cols;
      out(rr, cc2) += kernel(r, c);
    }
  }
  return out;
}

}  // namespace psfcdl
