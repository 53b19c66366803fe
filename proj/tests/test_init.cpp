#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "spr/errors.hpp"
#include "spr/init.hpp"
#include "spr/signal_model.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using spr::Index;
using spr::RandomStream;

TEST_CASE("marginal scores separate on-support coordinates") {
  RandomStream rng(41);
  const Index m = 50000, n = 3;
  const spr::SensingMatrix A = spr::generate_sensing_matrix(m, n, rng);
  VectorXd x = VectorXd::Zero(n);
  x[0] = 1.0;
  const VectorXd y = spr::measure(A, x);
  const VectorXd scores = spr::marginal_scores(A.entries, y);
  // E score_j = ||x||^2 + 2 x_j^2: 3 on the support coordinate, 1 elsewhere.
  CHECK(std::abs(scores[0] - 3.0) < 0.1);
  CHECK(std::abs(scores[1] - 1.0) < 0.1);
  CHECK(std::abs(scores[2] - 1.0) < 0.1);
}

TEST_CASE("estimate_support captures unit-magnitude supports at large m") {
  RandomStream rng(42);
  const Index n = 100, s = 5, m = 5000;
  int contained = 0;
  const int kTrials = 100;
  for (int t = 0; t < kTrials; ++t) {
    RandomStream inst = rng.derive(static_cast<std::uint64_t>(t));
    spr::SparseSignal sig = spr::generate_sparse_signal(n, s, inst);
    for (Index idx : sig.support) {
      sig.values[idx] = sig.values[idx] >= 0.0 ? 1.0 : -1.0;
    }
    const spr::SensingMatrix A = spr::generate_sensing_matrix(m, n, inst);
    const VectorXd y = spr::measure(A, sig.values);
    const std::vector<Index> est = spr::estimate_support(A.entries, y, s);
    contained += std::includes(est.begin(), est.end(), sig.support.begin(),
                               sig.support.end());
  }
  CHECK(contained >= 95);
}

TEST_CASE("spectral initializer agrees with a dense eigensolver oracle") {
  RandomStream rng(43);
  for (int rep = 0; rep < 10; ++rep) {
    const Index n = 12, s = 3, m = 40;
    RandomStream inst = rng.derive(static_cast<std::uint64_t>(rep));
    const spr::SparseSignal sig = spr::generate_sparse_signal(n, s, inst);
    const spr::SensingMatrix A = spr::generate_sensing_matrix(m, n, inst);
    const VectorXd y = spr::measure(A, sig.values);

    const spr::InitResult init = spr::spectral_initialize(A.entries, y, s);

    // Rebuild the weighted correlation matrix on the reported support and
    // diagonalize it with an independent dense solver.
    MatrixXd B(m, s);
    for (Index k = 0; k < s; ++k) {
      B.col(k) = A.entries.col(init.support_estimate[static_cast<std::size_t>(k)]);
    }
    const MatrixXd M = (B.transpose() * y.array().square().matrix().asDiagonal() *
                        B) /
                       static_cast<double>(m);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(M);
    const VectorXd principal = eig.eigenvectors().col(s - 1);
    const double lambda = eig.eigenvalues()[s - 1];

    VectorXd v(s);
    for (Index k = 0; k < s; ++k) {
      v[k] = init.x0[init.support_estimate[static_cast<std::size_t>(k)]];
    }
    v /= v.norm();
    CHECK(std::abs(v.dot(principal)) >= 1.0 - 1e-8);

    CHECK(std::abs(init.x0.norm() - init.norm_target) <= 1e-10 * init.norm_target);
    CHECK(init.norm_target ==
          doctest::Approx(y.norm() / std::sqrt(static_cast<double>(m))));
    CHECK(init.converged);
    CHECK(init.power_iters_used >= 1);
    CHECK(init.power_iters_used <= 1000);
    CHECK(init.eig_residual <= 1e-8 * std::abs(lambda) + 1e-14);

    // x0 vanishes off the estimated support.
    for (Index i = 0; i < n; ++i) {
      if (!std::binary_search(init.support_estimate.begin(),
                              init.support_estimate.end(), i)) {
        CHECK(init.x0[i] == 0.0);
      }
    }
  }
}

TEST_CASE("spectral initializer handles s = 1 and signed noisy input") {
  RandomStream rng(44);
  const spr::SensingMatrix A = spr::generate_sensing_matrix(200, 6, rng);

  SUBCASE("s = 1") {
    VectorXd x = VectorXd::Zero(6);
    x[4] = 2.0;
    const VectorXd y = spr::measure(A, x);
    const spr::InitResult init = spr::spectral_initialize(A.entries, y, 1);
    CHECK(init.support_estimate == std::vector<Index>{4});
    CHECK(std::abs(init.x0.norm() - init.norm_target) <=
          1e-10 * init.norm_target);
  }

  SUBCASE("noisy measurements with negative entries are accepted") {
    VectorXd x = VectorXd::Zero(6);
    x[1] = 1.0;
    VectorXd y = spr::measure(A, x);
    RandomStream noise(45);
    y = spr::add_noise(y, 0.5, noise);
    REQUIRE((y.array() < 0.0).any());
    const spr::InitResult init = spr::spectral_initialize(A.entries, y, 2);
    CHECK(std::isfinite(init.x0.norm()));
    CHECK(std::abs(init.x0.norm() - init.norm_target) <=
          1e-10 * init.norm_target);
  }
}

TEST_CASE("spectral initializer rejects degenerate input") {
  RandomStream rng(46);
  const spr::SensingMatrix A = spr::generate_sensing_matrix(30, 5, rng);
  const VectorXd zero = VectorXd::Zero(30);
  CHECK_THROWS_AS(spr::spectral_initialize(A.entries, zero, 2),
                  spr::DegenerateInputError);
  CHECK_THROWS_AS(spr::spectral_initialize(A.entries, VectorXd::Zero(7), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(spr::spectral_initialize(A.entries, zero, 0),
                  std::invalid_argument);
}
