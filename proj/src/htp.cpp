#include "spr/htp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spr/errors.hpp"

namespace spr {
namespace {

Eigen::MatrixXd column_block(const Eigen::Ref<const Eigen::MatrixXd>& A,
                             const std::vector<Index>& support) {
  Eigen::MatrixXd B(A.rows(), static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    B.col(static_cast<Index>(k)) = A.col(support[k]);
  }
  return B;
}

}  // namespace

std::vector<Index> top_s_indices(const Eigen::Ref<const Eigen::VectorXd>& v,
                                 Index s) {
  const Index n = v.size();
  if (s < 1 || s > n) {
    throw std::invalid_argument("top_s_indices: require 1 <= s <= size(v)");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  // Larger magnitude first; equal magnitudes keep the smaller index.
  const auto before = [&v](Index a, Index b) {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  };
  std::nth_element(order.begin(), order.begin() + (s - 1), order.end(), before);
  std::vector<Index> out(order.begin(), order.begin() + s);
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::VectorXd least_squares_on_support(
    const Eigen::Ref<const Eigen::MatrixXd>& A,
    const Eigen::Ref<const Eigen::VectorXd>& b,
    const std::vector<Index>& support) {
  if (b.size() != A.rows()) {
    throw std::invalid_argument("least_squares_on_support: b dimension mismatch");
  }
  const Index k = static_cast<Index>(support.size());
  if (k > A.rows()) {
    throw UnderdeterminedSupportError(
        "least_squares_on_support: support larger than row count");
  }
  for (Index idx : support) {
    if (idx < 0 || idx >= A.cols()) {
      throw std::invalid_argument("least_squares_on_support: index out of range");
    }
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
  if (k == 0) {
    return x;
  }

  const Eigen::MatrixXd B = column_block(A, support);
  const Eigen::MatrixXd gram = B.transpose() * B;
  const Eigen::VectorXd rhs = B.transpose() * b;

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  Eigen::VectorXd coeffs;
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) {
    coeffs = llt.solve(rhs);
  } else {
    // Numerically singular Gram matrix: rank-revealing minimum-norm solve on
    // the column block itself.
    coeffs = B.completeOrthogonalDecomposition().solve(b);
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    x[support[i]] = coeffs[static_cast<Index>(i)];
  }
  return x;
}

Eigen::VectorXd htp_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                          const Eigen::Ref<const Eigen::VectorXd>& b, Index s,
                          int rounds, const Eigen::VectorXd& x_start,
                          double step_scale) {
  if (rounds < 1) {
    throw std::invalid_argument("htp_solve: rounds must be >= 1");
  }
  if (!(step_scale > 0.0)) {
    throw std::invalid_argument("htp_solve: step_scale must be positive");
  }
  if (x_start.size() != A.cols()) {
    throw std::invalid_argument("htp_solve: x_start dimension mismatch");
  }
  if (b.size() != A.rows()) {
    throw std::invalid_argument("htp_solve: b dimension mismatch");
  }
  if (s < 1 || s > A.cols()) {
    throw std::invalid_argument("htp_solve: require 1 <= s <= cols(A)");
  }

  Eigen::VectorXd x = x_start;
  std::vector<Index> support;  // empty until the first round
  for (int round = 0; round < rounds; ++round) {
    const Eigen::VectorXd grad_step =
        x + step_scale * (A.transpose() * (b - A * x));
    std::vector<Index> next = top_s_indices(grad_step, s);
    if (next == support) {
      break;  // same support => same LS solution => fixed point
    }
    support = std::move(next);
    x = least_squares_on_support(A, b, support);
  }
  return x;
}

Eigen::VectorXd htp_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                          const Eigen::Ref<const Eigen::VectorXd>& b, Index s,
                          int rounds) {
  return htp_solve(A, b, s, rounds, Eigen::VectorXd::Zero(A.cols()),
                   1.0 / static_cast<double>(A.rows()));
}

double normal_equation_residual(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                const Eigen::Ref<const Eigen::VectorXd>& b,
                                const Eigen::VectorXd& x,
                                const std::vector<Index>& support) {
  const Eigen::VectorXd r = b - A * x;
  double worst = 0.0;
  for (Index idx : support) {
    worst = std::max(worst, std::abs(A.col(idx).dot(r)));
  }
  const double scale = std::max(1.0, A.norm() * b.norm());
  return worst / scale;
}

}  // namespace spr
