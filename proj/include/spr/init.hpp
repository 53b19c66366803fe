#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spr/signal_model.hpp"

namespace spr {

struct PowerIterationConfig {
  int max_iters = 1000;
  double tol = 1e-8;
};

struct InitResult {
  std::vector<Index> support_estimate;  // sorted, size s
  Eigen::VectorXd x0;                   // length n, supported on the estimate
  double norm_target = 0.0;             // ||y|| / sqrt(m)
  int power_iters_used = 0;
  double eig_residual = 0.0;  // ||M v - lambda v|| at the returned vector
  bool converged = false;     // eig_residual <= tol * |lambda|
};

// Per-coordinate second-moment scores (1/m) sum_i y_i^2 a_ij^2. On-support
// coordinates have elevated expectation ||x||^2 + 2 x_j^2; off-support ones
// sit at ||x||^2. Only y^2 enters, so signed noisy measurements are fine.
Eigen::VectorXd marginal_scores(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                const Eigen::Ref<const Eigen::VectorXd>& y);

// Top-s coordinates of the marginal scores.
std::vector<Index> estimate_support(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                    const Eigen::Ref<const Eigen::VectorXd>& y,
                                    Index s);

// Spectral initializer: principal eigenvector of the s x s weighted
// correlation matrix M = (1/m) sum_i y_i^2 [a_i]_S [a_i]_S^T on the estimated
// support, scaled to ||y|| / sqrt(m) and embedded into R^n. The eigenvector
// is computed by plain power iteration (deterministic start: column of M with
// the largest norm). Throws DegenerateInputError when y is all zero.
InitResult spectral_initialize(const Eigen::Ref<const Eigen::MatrixXd>& A,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               Index s, PowerIterationConfig power = {});

}  // namespace spr
