#include "spr/oracle.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "spr/errors.hpp"
#include "spr/metrics.hpp"

namespace spr {
namespace {

// C(n, s) with saturation; anything above the guard is reported as the guard
// plus one so the comparison stays exact.
std::size_t binomial_capped(Index n, Index s, std::size_t cap) {
  long double value = 1.0L;
  for (Index i = 1; i <= s; ++i) {
    value *= static_cast<long double>(n - s + i);
    value /= static_cast<long double>(i);
    if (value > static_cast<long double>(cap)) {
      return cap + 1;
    }
  }
  return static_cast<std::size_t>(value + 0.5L);
}

Eigen::MatrixXd column_block(const Eigen::Ref<const Eigen::MatrixXd>& A,
                             const std::vector<Index>& support) {
  Eigen::MatrixXd B(A.rows(), static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    B.col(static_cast<Index>(k)) = A.col(support[k]);
  }
  return B;
}

}  // namespace

ExhaustiveLsResult exhaustive_sparse_ls(
    const Eigen::Ref<const Eigen::MatrixXd>& A,
    const Eigen::Ref<const Eigen::VectorXd>& b, Index s,
    std::size_t max_supports) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (b.size() != m) {
    throw std::invalid_argument("exhaustive_sparse_ls: b dimension mismatch");
  }
  if (s < 1 || s > n) {
    throw std::invalid_argument("exhaustive_sparse_ls: require 1 <= s <= n");
  }
  if (s > m) {
    throw UnderdeterminedSupportError(
        "exhaustive_sparse_ls: s exceeds the row count");
  }
  if (binomial_capped(n, s, max_supports) > max_supports) {
    throw CombinatorialGuardError(
        "exhaustive_sparse_ls: C(n, s) exceeds the enumeration guard");
  }

  ExhaustiveLsResult best;
  best.residual_norm = std::numeric_limits<double>::infinity();

  // Lexicographic enumeration; strict improvement keeps the first (i.e.
  // lexicographically smallest) support on ties.
  std::vector<Index> support(static_cast<std::size_t>(s));
  std::iota(support.begin(), support.end(), Index{0});
  while (true) {
    const Eigen::MatrixXd B = column_block(A, support);
    // QR route, independent of the normal-equation solver under test.
    const Eigen::VectorXd coeffs = B.householderQr().solve(b);
    const double residual = (b - B * coeffs).norm();
    ++best.supports_searched;
    if (residual < best.residual_norm) {
      best.residual_norm = residual;
      best.support = support;
      best.solution = Eigen::VectorXd::Zero(n);
      for (std::size_t k = 0; k < support.size(); ++k) {
        best.solution[support[k]] = coeffs[static_cast<Index>(k)];
      }
    }
    // Advance to the next combination.
    Index pos = s - 1;
    while (pos >= 0 && support[static_cast<std::size_t>(pos)] == n - s + pos) {
      --pos;
    }
    if (pos < 0) {
      break;
    }
    ++support[static_cast<std::size_t>(pos)];
    for (Index q = pos + 1; q < s; ++q) {
      support[static_cast<std::size_t>(q)] =
          support[static_cast<std::size_t>(q - 1)] + 1;
    }
  }
  return best;
}

double rip_estimate(const Eigen::Ref<const Eigen::MatrixXd>& A, Index r,
                    int trials, double scale, RandomStream& rng) {
  const Index n = A.cols();
  if (r < 1 || r > n) {
    throw std::invalid_argument("rip_estimate: require 1 <= r <= cols(A)");
  }
  if (trials < 1) {
    throw std::invalid_argument("rip_estimate: trials must be >= 1");
  }
  if (!(scale > 0.0)) {
    throw std::invalid_argument("rip_estimate: scale must be positive");
  }

  std::vector<Index> perm(static_cast<std::size_t>(n));
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::iota(perm.begin(), perm.end(), Index{0});
    Eigen::VectorXd coeffs(r);
    double sq = 0.0;
    for (Index i = 0; i < r; ++i) {
      const Index j = i + static_cast<Index>(
                              rng.uniform_below(static_cast<std::uint64_t>(n - i)));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
      coeffs[i] = rng.normal();
      sq += coeffs[i] * coeffs[i];
    }
    coeffs /= std::sqrt(sq);
    Eigen::VectorXd image = Eigen::VectorXd::Zero(A.rows());
    for (Index i = 0; i < r; ++i) {
      image.noalias() += A.col(perm[static_cast<std::size_t>(i)]) * coeffs[i];
    }
    worst = std::max(worst, std::abs(scale * image.squaredNorm() - 1.0));
  }
  return worst;
}

SignMismatchCheck sign_mismatch_bound_check(
    const Eigen::Ref<const Eigen::MatrixXd>& A, const Eigen::VectorXd& x_true,
    const Eigen::VectorXd& x_near, double beta, RandomStream& rng) {
  const Index m = A.rows();
  if (x_true.size() != A.cols() || x_near.size() != A.cols()) {
    throw std::invalid_argument("sign_mismatch_bound_check: dimension mismatch");
  }
  const double true_norm = x_true.norm();
  if (!(true_norm > 0.0)) {
    throw std::invalid_argument("sign_mismatch_bound_check: x_true must be nonzero");
  }
  const double d = dist(x_near, x_true);
  if (d > true_norm / 8.0) {
    throw std::invalid_argument(
        "sign_mismatch_bound_check: x_near outside the 1/8 neighborhood");
  }

  // Match the sign branch so the check is invariant under x_near -> -x_near.
  const Eigen::VectorXd z =
      (x_near + x_true).norm() < (x_near - x_true).norm() ? (-x_near).eval()
                                                          : x_near;

  const IndexSubset subset = bernoulli_subsample(m, beta, rng);
  SignMismatchCheck out;
  out.subset_size = subset.size();
  out.lambda = d / true_norm;
  out.c_lambda = 2.0 * (1e-3 + out.lambda * std::sqrt(21.0 / 20.0)) /
                 (1.0 - out.lambda);
  out.rhs = out.c_lambda * std::sqrt(static_cast<double>(m)) * d;

  double sq = 0.0;
  for (Index row : subset.indices) {
    const double truth_dot = A.row(row).dot(x_true);
    const double near_dot = A.row(row).dot(z);
    const double signed_measurement =
        (near_dot >= 0.0 ? 1.0 : -1.0) * std::abs(truth_dot);
    const double diff = signed_measurement - truth_dot;
    sq += diff * diff;
  }
  out.lhs = std::sqrt(sq);
  out.holds = out.lhs <= out.rhs;
  return out;
}

}  // namespace spr
