#include "spr/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace spr {

double dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dist: dimension mismatch");
  }
  return std::min((a - b).norm(), (a + b).norm());
}

double relative_error(const Eigen::VectorXd& xhat,
                      const Eigen::VectorXd& xtrue) {
  const double denom = xtrue.norm();
  if (!(denom > 0.0)) {
    throw std::invalid_argument("relative_error: ||xtrue|| must be positive");
  }
  return dist(xhat, xtrue) / denom;
}

bool is_success(const Eigen::VectorXd& xhat, const Eigen::VectorXd& xtrue,
                double threshold) {
  return relative_error(xhat, xtrue) <= threshold;
}

RecoveryAssessment assess_recovery(const Eigen::VectorXd& xhat,
                                   const Eigen::VectorXd& xtrue,
                                   double threshold) {
  const double denom = xtrue.norm();
  if (!(denom > 0.0)) {
    throw std::invalid_argument("assess_recovery: ||xtrue|| must be positive");
  }
  RecoveryAssessment out;
  out.distance = dist(xhat, xtrue);
  out.rel_error = out.distance / denom;
  out.threshold = threshold;
  out.success = out.rel_error <= threshold;
  return out;
}

}  // namespace spr
