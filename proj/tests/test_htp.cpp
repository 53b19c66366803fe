#include <doctest.h>

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

#include "spr/errors.hpp"
#include "spr/htp.hpp"
#include "spr/oracle.hpp"
#include "spr/signal_model.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using spr::Index;
using spr::RandomStream;

TEST_CASE("top_s_indices selects magnitudes with smallest-index tie-break") {
  VectorXd v(3);
  v << 3, -5, 2;
  CHECK(spr::top_s_indices(v, 2) == std::vector<Index>{0, 1});

  VectorXd ties(3);
  ties << 1, 1, 0;
  CHECK(spr::top_s_indices(ties, 1) == std::vector<Index>{0});

  CHECK_THROWS_AS(spr::top_s_indices(v, 0), std::invalid_argument);
  CHECK_THROWS_AS(spr::top_s_indices(v, 4), std::invalid_argument);
}

TEST_CASE("top_s_indices agrees with a full sort") {
  RandomStream rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const Index n = 5 + static_cast<Index>(rng.uniform_below(40));
    const Index s = 1 + static_cast<Index>(rng.uniform_below(
                            static_cast<std::uint64_t>(n)));
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) {
      // Small integer grid so magnitude ties actually occur.
      v[i] = static_cast<double>(static_cast<int>(rng.uniform_below(7)) - 3);
    }
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return std::abs(v[a]) > std::abs(v[b]);
    });
    std::vector<Index> expect(order.begin(), order.begin() + s);
    std::sort(expect.begin(), expect.end());
    CHECK(spr::top_s_indices(v, s) == expect);
  }
}

TEST_CASE("least squares on orthonormal columns is the projection") {
  RandomStream rng(21);
  MatrixXd raw(8, 3);
  for (Index j = 0; j < 3; ++j) {
    for (Index i = 0; i < 8; ++i) {
      raw(i, j) = rng.normal();
    }
  }
  const MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(raw)
                         .householderQ() *
                     MatrixXd::Identity(8, 3);
  MatrixXd A(8, 5);
  for (Index j = 0; j < 5; ++j) {
    for (Index i = 0; i < 8; ++i) {
      A(i, j) = rng.normal();
    }
  }
  const std::vector<Index> support{0, 2, 4};
  for (std::size_t k = 0; k < support.size(); ++k) {
    A.col(support[k]) = Q.col(static_cast<Index>(k));
  }
  VectorXd b(8);
  for (Index i = 0; i < 8; ++i) b[i] = rng.normal();

  const VectorXd x = spr::least_squares_on_support(A, b, support);
  const VectorXd proj = Q.transpose() * b;
  for (std::size_t k = 0; k < support.size(); ++k) {
    CHECK(x[support[k]] ==
          doctest::Approx(proj[static_cast<Index>(k)]).epsilon(1e-12));
  }
  for (Index i = 0; i < 5; ++i) {
    if (std::find(support.begin(), support.end(), i) == support.end()) {
      CHECK(x[i] == 0.0);
    }
  }
}

TEST_CASE("least squares matches an explicit 2x2 normal-equation solve") {
  RandomStream rng(22);
  MatrixXd A(6, 4);
  for (Index j = 0; j < 4; ++j) {
    for (Index i = 0; i < 6; ++i) {
      A(i, j) = rng.normal();
    }
  }
  VectorXd b(6);
  for (Index i = 0; i < 6; ++i) b[i] = rng.normal();

  const std::vector<Index> support{0, 2};
  const VectorXd x = spr::least_squares_on_support(A, b, support);

  // Cramer's rule on the 2x2 Gram system, written out by hand.
  const VectorXd u = A.col(0);
  const VectorXd w = A.col(2);
  const double g11 = u.dot(u), g12 = u.dot(w), g22 = w.dot(w);
  const double r1 = u.dot(b), r2 = w.dot(b);
  const double det = g11 * g22 - g12 * g12;
  CHECK(x[0] == doctest::Approx((r1 * g22 - r2 * g12) / det).epsilon(1e-10));
  CHECK(x[2] == doctest::Approx((g11 * r2 - g12 * r1) / det).epsilon(1e-10));
  CHECK(x[1] == 0.0);
  CHECK(x[3] == 0.0);
}

TEST_CASE("singular Gram matrices fall back to the minimum-norm solution") {
  RandomStream rng(23);
  MatrixXd A(6, 2);
  for (Index i = 0; i < 6; ++i) A(i, 0) = rng.normal();
  A.col(1) = A.col(0);  // exactly repeated column
  const VectorXd b = 3.0 * A.col(0);

  const VectorXd x = spr::least_squares_on_support(A, b, {0, 1});
  // Minimum-norm split of the coefficient 3 across the duplicated columns.
  CHECK(x[0] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(x[1] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK((b - A * x).norm() <= 1e-10 * b.norm());
}

TEST_CASE("least squares input validation") {
  MatrixXd A = MatrixXd::Identity(3, 5);
  VectorXd b = VectorXd::Ones(3);
  CHECK_THROWS_AS(spr::least_squares_on_support(A, b, {0, 1, 2, 3}),
                  spr::UnderdeterminedSupportError);
  CHECK_THROWS_AS(spr::least_squares_on_support(A, b, {7}),
                  std::invalid_argument);
  CHECK_THROWS_AS(spr::least_squares_on_support(A, VectorXd::Ones(4), {0}),
                  std::invalid_argument);
  // Empty support is legal and yields the zero vector.
  CHECK(spr::least_squares_on_support(A, b, {}).norm() == 0.0);
}

TEST_CASE("htp recovers planted sparse signals exactly") {
  RandomStream rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    const Index n = 30, s = 4, m = 60;
    RandomStream inst = rng.derive(static_cast<std::uint64_t>(rep));
    const spr::SparseSignal sig = spr::generate_sparse_signal(n, s, inst);
    const spr::SensingMatrix A = spr::generate_sensing_matrix(m, n, inst);
    const VectorXd b = A.entries * sig.values;

    const VectorXd x = spr::htp_solve(A.entries, b, s, 2 * static_cast<int>(s));
    CHECK((x - sig.values).norm() <= 1e-10 * sig.values.norm());
  }
}

TEST_CASE("htp started at the solution stays there") {
  RandomStream rng(32);
  const spr::SparseSignal sig = spr::generate_sparse_signal(20, 3, rng);
  const spr::SensingMatrix A = spr::generate_sensing_matrix(40, 20, rng);
  const VectorXd b = A.entries * sig.values;
  const VectorXd x = spr::htp_solve(A.entries, b, 3, 6, sig.values,
                                    1.0 / 40.0);
  CHECK((x - sig.values).norm() <= 1e-12 * sig.values.norm());
}

TEST_CASE("htp matches the exhaustive oracle on well-conditioned instances") {
  // Greedy selection is only guaranteed when the scaled columns are close to
  // isometric; draws whose exact order-1 defect max_j |1/m ||A_j||^2 - 1|
  // reaches 1/3 are skipped (such column-norm flukes can push the greedy
  // solver into a non-global fixed point). The loop rejection-samples until
  // 20 instances satisfy the predicate, so the case never runs hollow.
  RandomStream rng(33);
  int checked = 0;
  for (int rep = 0; rep < 200 && checked < 20; ++rep) {
    const Index n = 8, s = 2, m = 48;
    RandomStream inst = rng.derive(static_cast<std::uint64_t>(rep));
    const spr::SparseSignal sig = spr::generate_sparse_signal(n, s, inst);
    const spr::SensingMatrix A = spr::generate_sensing_matrix(m, n, inst);
    const VectorXd b = A.entries * sig.values;

    const double column_defect =
        (A.entries.colwise().squaredNorm().array() / static_cast<double>(m) -
         1.0)
            .abs()
            .maxCoeff();
    if (column_defect >= 1.0 / 3.0) continue;
    ++checked;

    const VectorXd x = spr::htp_solve(A.entries, b, s, 2 * static_cast<int>(s));
    const spr::ExhaustiveLsResult oracle = spr::exhaustive_sparse_ls(A.entries, b, s);
    CHECK(oracle.supports_searched == 28);  // C(8,2)
    const double htp_residual = (b - A.entries * x).norm();
    CHECK(htp_residual <= oracle.residual_norm + 1e-8);
    CHECK((x - oracle.solution).norm() <= 1e-8);
  }
  CHECK(checked == 20);
}

TEST_CASE("htp outputs satisfy the normal equations on their support") {
  RandomStream rng(34);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 25, s = 3, m = 40;
    RandomStream inst = rng.derive(static_cast<std::uint64_t>(rep));
    const spr::SensingMatrix A = spr::generate_sensing_matrix(m, n, inst);
    VectorXd b(m);
    for (Index i = 0; i < m; ++i) b[i] = inst.normal();  // arbitrary target

    const VectorXd x = spr::htp_solve(A.entries, b, s, 2 * static_cast<int>(s));
    std::vector<Index> support;
    for (Index i = 0; i < n; ++i) {
      if (x[i] != 0.0) support.push_back(i);
    }
    CHECK(support.size() <= static_cast<std::size_t>(s));
    CHECK(spr::normal_equation_residual(A.entries, b, x, support) <= 1e-8);
  }
}

TEST_CASE("htp input validation") {
  MatrixXd A = MatrixXd::Identity(4, 4);
  VectorXd b = VectorXd::Ones(4);
  const VectorXd x0 = VectorXd::Zero(4);
  CHECK_THROWS_AS(spr::htp_solve(A, b, 1, 0, x0, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(spr::htp_solve(A, b, 1, 3, x0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(spr::htp_solve(A, b, 0, 3, x0, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(spr::htp_solve(A, b, 5, 3, x0, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(spr::htp_solve(A, b, 1, 3, VectorXd::Zero(3), 0.25),
                  std::invalid_argument);
  CHECK_THROWS_AS(spr::htp_solve(A, VectorXd::Ones(5), 1, 3, x0, 0.25),
                  std::invalid_argument);
}
