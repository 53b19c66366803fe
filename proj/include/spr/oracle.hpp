#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "spr/signal_model.hpp"

namespace spr {

struct ExhaustiveLsResult {
  std::vector<Index> support;  // sorted; lexicographically smallest on ties
  Eigen::VectorXd solution;    // length n
  double residual_norm = 0.0;
  std::size_t supports_searched = 0;
};

// Global s-sparse least squares by brute force: enumerates all C(n, s)
// supports in lexicographic order and solves each by QR (a route independent
// of the normal-equation path used elsewhere). Throws CombinatorialGuardError
// when C(n, s) exceeds `max_supports`.
ExhaustiveLsResult exhaustive_sparse_ls(
    const Eigen::Ref<const Eigen::MatrixXd>& A,
    const Eigen::Ref<const Eigen::VectorXd>& b, Index s,
    std::size_t max_supports = 1000000);

// Monte-Carlo lower bound on the restricted isometry constant of order r:
// max over `trials` random r-sparse unit vectors of |scale * ||A x||^2 - 1|.
double rip_estimate(const Eigen::Ref<const Eigen::MatrixXd>& A, Index r,
                    int trials, double scale, RandomStream& rng);

struct SignMismatchCheck {
  double lhs = 0.0;       // ||sgn(A_I x_near) .* |A_I x_true| - A_I x_true||
  double rhs = 0.0;       // c_lambda * sqrt(m) * dist(x_near, x_true)
  double lambda = 0.0;    // dist(x_near, x_true) / ||x_true||
  double c_lambda = 0.0;  // 2 (1e-3 + lambda sqrt(21/20)) / (1 - lambda)
  Index subset_size = 0;
  bool holds = false;  // lhs <= rhs
};

// Empirical check of the sign-mismatch residual bound that drives the local
// contraction analysis: draws a fresh Bernoulli(beta) row subset, forms the
// sign-corrected measurements from x_near, and compares the residual against
// the bound. x_near is first flipped onto the sign branch nearer x_true, so
// the check is invariant under x_near -> -x_near. Requires
// dist(x_near, x_true) <= ||x_true|| / 8.
SignMismatchCheck sign_mismatch_bound_check(
    const Eigen::Ref<const Eigen::MatrixXd>& A, const Eigen::VectorXd& x_true,
    const Eigen::VectorXd& x_near, double beta, RandomStream& rng);

}  // namespace spr
