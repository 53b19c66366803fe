#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spr/signal_model.hpp"

namespace spr {

// Indices of the s largest-magnitude entries of v, ties broken toward the
// smaller index; returned sorted ascending.
std::vector<Index> top_s_indices(const Eigen::Ref<const Eigen::VectorXd>& v,
                                 Index s);

// argmin_x ||A x - b|| subject to x supported on `support`. Solves the
// |S| x |S| normal equations by Cholesky; if the Gram matrix is numerically
// singular (reciprocal condition < 1e-12) falls back to a rank-revealing
// minimum-norm solve on the column block. Throws UnderdeterminedSupportError
// when |S| exceeds rows(A).
Eigen::VectorXd least_squares_on_support(
    const Eigen::Ref<const Eigen::MatrixXd>& A,
    const Eigen::Ref<const Eigen::VectorXd>& b,
    const std::vector<Index>& support);

// Hard thresholding pursuit: up to `rounds` iterations of a gradient step
// x + step_scale * A^T (b - A x), s-sparse hard threshold, then exact least
// squares on the selected support. Exits early once the support repeats
// (the iterate is then a fixed point).
Eigen::VectorXd htp_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                          const Eigen::Ref<const Eigen::VectorXd>& b, Index s,
                          int rounds, const Eigen::VectorXd& x_start,
                          double step_scale);

// Standalone variant: zero start, step scale 1/rows(A).
Eigen::VectorXd htp_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                          const Eigen::Ref<const Eigen::VectorXd>& b, Index s,
                          int rounds);

// Normal-equation residual ||A_S^T (b - A x)||_inf scaled by
// max(1, ||A||_F ||b||); near zero iff x is the exact LS solution on S.
double normal_equation_residual(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                const Eigen::Ref<const Eigen::VectorXd>& b,
                                const Eigen::VectorXd& x,
                                const std::vector<Index>& support);

}  // namespace spr
