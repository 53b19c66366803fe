#include "spr/init.hpp"

#include <cmath>
#include <stdexcept>

#include "spr/errors.hpp"
#include "spr/htp.hpp"

namespace spr {

Eigen::VectorXd marginal_scores(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (y.size() != m) {
    throw std::invalid_argument("marginal_scores: y dimension mismatch");
  }
  const Eigen::ArrayXd y2 = y.array().square();
  Eigen::VectorXd scores(n);
  for (Index j = 0; j < n; ++j) {
    scores[j] = (A.col(j).array().square() * y2).sum() / static_cast<double>(m);
  }
  return scores;
}

std::vector<Index> estimate_support(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                    const Eigen::Ref<const Eigen::VectorXd>& y,
                                    Index s) {
  return top_s_indices(marginal_scores(A, y), s);
}

InitResult spectral_initialize(const Eigen::Ref<const Eigen::MatrixXd>& A,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               Index s, PowerIterationConfig power) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (y.size() != m) {
    throw std::invalid_argument("spectral_initialize: y dimension mismatch");
  }
  if (s < 1 || s > n) {
    throw std::invalid_argument("spectral_initialize: require 1 <= s <= n");
  }
  if (power.max_iters < 1 || !(power.tol > 0.0)) {
    throw std::invalid_argument("spectral_initialize: bad power-iteration config");
  }
  const double y_norm = y.norm();
  if (!(y_norm > 0.0)) {
    throw DegenerateInputError("spectral_initialize: measurements are all zero");
  }

  InitResult out;
  out.support_estimate = estimate_support(A, y, s);
  out.norm_target = y_norm / std::sqrt(static_cast<double>(m));

  // M = (1/m) * B^T diag(y^2) B on the estimated support; PSD by construction.
  Eigen::MatrixXd B(m, s);
  for (Index k = 0; k < s; ++k) {
    B.col(k) = A.col(out.support_estimate[static_cast<std::size_t>(k)]);
  }
  const Eigen::VectorXd y2 = y.array().square();
  const Eigen::MatrixXd M =
      (B.transpose() * y2.asDiagonal() * B) / static_cast<double>(m);

  // Deterministic start: the column of M with the largest norm.
  Index start_col = 0;
  double best = -1.0;
  for (Index j = 0; j < s; ++j) {
    const double nj = M.col(j).norm();
    if (nj > best) {
      best = nj;
      start_col = j;
    }
  }
  if (!(best > 0.0)) {
    throw DegenerateInputError("spectral_initialize: weighted correlation matrix is zero");
  }

  Eigen::VectorXd v = M.col(start_col) / best;
  for (int t = 1; t <= power.max_iters; ++t) {
    Eigen::VectorXd w = M * v;
    const double wn = w.norm();
    if (!(wn > 0.0)) {
      throw DegenerateInputError("spectral_initialize: power iteration hit the kernel");
    }
    w /= wn;
    const double diff = (w - v).norm();
    v = std::move(w);
    out.power_iters_used = t;
    if (diff < power.tol) {
      break;
    }
  }

  const Eigen::VectorXd Mv = M * v;
  const double lambda = v.dot(Mv);
  out.eig_residual = (Mv - lambda * v).norm();
  out.converged = out.eig_residual <= power.tol * std::abs(lambda);

  v.normalize();  // guard against rounding drift before scaling
  out.x0 = Eigen::VectorXd::Zero(n);
  for (Index k = 0; k < s; ++k) {
    out.x0[out.support_estimate[static_cast<std::size_t>(k)]] =
        out.norm_target * v[k];
  }
  return out;
}

}  // namespace spr
