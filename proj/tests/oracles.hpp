// Independent numerical oracles shared by the unit and acceptance suites.
// Everything here is deliberately naive: direct summation, dense linear
// algebra, derivative-free minimization.
#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "psfcdl/grid.hpp"

namespace psfcdl::oracles {

inline double prox_objective(const Eigen::ArrayXd& x, const Eigen::ArrayXd& v,
                             double t) {
  double l1 = x.abs().sum();
  double l2 = std::sqrt(x.square().sum());
  return t * (l1 - l2) + 0.5 * (x - v).square().sum();
}

// Nelder-Mead on the prox objective.
inline Eigen::ArrayXd nelder_mead_prox(Eigen::ArrayXd start,
                                       const Eigen::ArrayXd& v, double t) {
  const int n = static_cast<int>(start.size());
  std::vector<Eigen::ArrayXd> simplex(n + 1, start);
  for (int i = 0; i < n; ++i)
    simplex[i + 1][i] += (start[i] != 0.0 ? 0.1 * std::abs(start[i]) : 0.05);
  auto f = [&](const Eigen::ArrayXd& x) { return prox_objective(x, v, t); };

  for (int iter = 0; iter < 2000; ++iter) {
    std::sort(simplex.begin(), simplex.end(),
              [&](const auto& a, const auto& b) { return f(a) < f(b); });
    Eigen::ArrayXd centroid = Eigen::ArrayXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i];
    centroid /= n;
    const Eigen::ArrayXd& worst = simplex[n];
    Eigen::ArrayXd reflect = centroid + (centroid - worst);
    if (f(reflect) < f(simplex[0])) {
      Eigen::ArrayXd expand = centroid + 2.0 * (centroid - worst);
      simplex[n] = f(expand) < f(reflect) ? expand : reflect;
    } else if (f(reflect) < f(simplex[n - 1])) {
      simplex[n] = reflect;
    } else {
      Eigen::ArrayXd contract = centroid + 0.5 * (worst - centroid);
      if (f(contract) < f(worst)) {
        simplex[n] = contract;
      } else {
        for (int i = 1; i <= n; ++i)
          simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
      }
    }
    double spread = 0.0;
    for (int i = 1; i <= n; ++i)
      spread = std::max(spread, (simplex[i] - simplex[0]).abs().maxCoeff());
    if (spread < 1e-12) break;
  }
  std::sort(simplex.begin(), simplex.end(),
            [&](const auto& a, const auto& b) { return f(a) < f(b); });
  return simplex[0];
}

// Cyclic coordinate descent polish: exact-ish 1D minimization per coordinate
// via a dense grid, a zero candidate, and ternary refinement. Nelder-Mead
// alone stalls at the l1 kinks; this drives the iterate to the nearby
// stationary point at full precision.
inline Eigen::ArrayXd coordinate_polish(Eigen::ArrayXd x,
                                        const Eigen::ArrayXd& v, double t) {
  const Eigen::Index n = x.size();
  for (int sweep = 0; sweep < 200; ++sweep) {
    double before = prox_objective(x, v, t);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto f1 = [&](double xi) {
        Eigen::ArrayXd y = x;
        y[i] = xi;
        return prox_objective(y, v, t);
      };
      double span = std::abs(v[i]) + 2.0 * t + 1.0;
      double best = 0.0, best_f = f1(0.0);
      const int grid = 400;
      for (int k = 0; k <= grid; ++k) {
        double xi = -span + 2.0 * span * k / grid;
        double fx = f1(xi);
        if (fx < best_f) {
          best_f = fx;
          best = xi;
        }
      }
      if (f1(x[i]) < best_f) best = x[i];
      double lo = best - 2.0 * span / grid, hi = best + 2.0 * span / grid;
      for (int k = 0; k < 90; ++k) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (f1(m1) < f1(m2))
          hi = m2;
        else
          lo = m1;
      }
      double refined = 0.5 * (lo + hi);
      if (f1(refined) < f1(best)) best = refined;
      if (f1(0.0) <= f1(best)) best = 0.0;
      x[i] = best;
    }
    if (before - prox_objective(x, v, t) < 1e-15) break;
  }
  return x;
}

// Multi-start brute-force prox minimizer: starts at v, 0, every 1-sparse
// candidate, and random perturbations; each Nelder-Mead result is polished
// by coordinate descent.
inline Eigen::ArrayXd brute_force_prox(const Eigen::ArrayXd& v, double t,
                                       std::mt19937& rng) {
  std::vector<Eigen::ArrayXd> starts{v, Eigen::ArrayXd::Zero(v.size())};
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Eigen::ArrayXd s = Eigen::ArrayXd::Zero(v.size());
    s[i] = v[i];
    starts.push_back(s);
  }
  std::normal_distribution<double> g(0.0, 0.3);
  for (int k = 0; k < 4; ++k) {
    Eigen::ArrayXd s = v;
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] += g(rng);
    starts.push_back(s);
  }
  Eigen::ArrayXd best = starts[0];
  double best_f = prox_objective(best, v, t);
  for (const auto& s : starts) {
    Eigen::ArrayXd x = coordinate_polish(nelder_mead_prox(s, v, t), v, t);
    double fx = prox_objective(x, v, t);
    if (fx < best_f) {
      best_f = fx;
      best = x;
    }
  }
  return best;
}

// Dense circulant convolution matrix acting on row-major flattened grids.
inline Eigen::MatrixXd circulant(const RealGrid& kernel) {
  const Eigen::Index rows = kernel.rows(), cols = kernel.cols();
  const Eigen::Index n = rows * cols;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    Eigen::Index pr = p / cols, pc = p % cols;
    for (Eigen::Index q = 0; q < n; ++q) {
      Eigen::Index qr = q / cols, qc = q % cols;
      m(p, q) = kernel((pr - qr + rows) % rows, (pc - qc + cols) % cols);
    }
  }
  return m;
}

inline RealGrid random_grid(Eigen::Index rows, Eigen::Index cols,
                            unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  RealGrid out(rows, cols);
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = g(rng);
  return out;
}

}  // namespace psfcdl::oracles
