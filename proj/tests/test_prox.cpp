#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "psfcdl/prox.hpp"

using namespace psfcdl;
using oracles::brute_force_prox;
using oracles::prox_objective;

TEST_CASE("prox at origin and on 1-sparse input") {
  Eigen::ArrayXd zero = Eigen::ArrayXd::Zero(4);
  CHECK(prox_l1_minus_l2(zero, 0.7).abs().maxCoeff() == 0.0);

  Eigen::ArrayXd one_hot = Eigen::ArrayXd::Zero(5);
  one_hot[2] = -1.4;
  Eigen::ArrayXd out = prox_l1_minus_l2(one_hot, 0.5);
  CHECK((out - one_hot).abs().maxCoeff() < 1e-14);
  // Also below the threshold.
  out = prox_l1_minus_l2(one_hot, 5.0);
  CHECK((out - one_hot).abs().maxCoeff() < 1e-14);
}

TEST_CASE("prox rejects non-positive threshold") {
  Eigen::ArrayXd v = Eigen::ArrayXd::Ones(3);
  CHECK_THROWS_AS(prox_l1_minus_l2(v, 0.0), std::invalid_argument);
}

TEST_CASE("prox matches brute-force minimization") {
  std::mt19937 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 8);
  for (double t : {0.1, 1.0}) {
    for (int rep = 0; rep < 60; ++rep) {
      Eigen::ArrayXd v(len(rng));
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g(rng);
      Eigen::ArrayXd closed = prox_l1_minus_l2(v, t);
      Eigen::ArrayXd oracle = brute_force_prox(v, t, rng);
      // The closed form must be at least as good, and land on the same point.
      CHECK(prox_objective(closed, v, t) <=
            prox_objective(oracle, v, t) + 1e-8);
      CHECK((closed - oracle).abs().maxCoeff() < 1e-5);
    }
  }
}

TEST_CASE("small-norm branch is 1-sparse at the max coordinate") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::ArrayXd v(6);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = u(rng);
    double t = v.abs().maxCoeff() + 0.01;
    Eigen::ArrayXd out = prox_l1_minus_l2(v, t);
    int nonzeros = (out != 0.0).count();
    CHECK(nonzeros <= 1);
    Eigen::Index imax = 0;
    v.abs().maxCoeff(&imax);
    CHECK(out[imax] == v[imax]);
  }
}
