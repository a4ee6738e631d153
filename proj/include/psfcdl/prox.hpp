#pragma once

#include <Eigen/Dense>

namespace psfcdl {

// Closed-form proximal operator of t * (||x||_1 - ||x||_2), the l1-l2
// sparsity penalty:
//   argmin_x  t (||x||_1 - ||x||_2) + 0.5 ||x - v||_2^2
// When ||v||_inf > t the soft-threshold result is rescaled by
// (||z|| + t) / ||z||; otherwise the minimizer is 1-sparse and keeps the
// largest-magnitude entry of v unchanged (ties broken toward the first
// maximal coordinate).
template <typename Derived>
Eigen::ArrayXd prox_l1_minus_l2(const Eigen::ArrayBase<Derived>& v, double t) {
  if (t <= 0.0) throw std::invalid_argument("prox_l1_minus_l2: t <= 0");
  Eigen::ArrayXd va = v;
  const double vmax = va.abs().maxCoeff();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(va.size());
  if (vmax > t) {
    Eigen::ArrayXd z = va.sign() * (va.abs() - t).max(0.0);
    double zn = std::sqrt(z.square().sum());
    out = z * ((zn + t) / zn);
  } else if (vmax > 0.0) {
    Eigen::Index imax = 0;
    va.abs().maxCoeff(&imax);
    out[imax] = va[imax];
  }
  return out;
}

}  // namespace psfcdl
