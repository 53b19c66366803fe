#pragma once

#include <Eigen/Dense>

namespace spr {

// Default relative-error threshold below which a recovery counts as exact.
inline constexpr double kSuccessThreshold = 1e-3;

// Sign-invariant distance min(||a - b||, ||a + b||); the global sign of a
// magnitude-only recovery is unidentifiable.
double dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// dist(xhat, xtrue) / ||xtrue||; requires ||xtrue|| > 0.
double relative_error(const Eigen::VectorXd& xhat, const Eigen::VectorXd& xtrue);

// relative_error <= threshold.
bool is_success(const Eigen::VectorXd& xhat, const Eigen::VectorXd& xtrue,
                double threshold = kSuccessThreshold);

struct RecoveryAssessment {
  double distance = 0.0;
  double rel_error = 0.0;
  double threshold = kSuccessThreshold;
  bool success = false;
};

RecoveryAssessment assess_recovery(const Eigen::VectorXd& xhat,
                                   const Eigen::VectorXd& xtrue,
                                   double threshold = kSuccessThreshold);

}  // namespace spr
