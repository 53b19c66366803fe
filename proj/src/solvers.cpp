#include "spr/solvers.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "spr/htp.hpp"
#include "spr/metrics.hpp"

namespace spr {
namespace {

constexpr std::uint64_t kSubsetStream = 101;

void validate_inputs(const Eigen::Ref<const Eigen::MatrixXd>& A,
                     const Eigen::Ref<const Eigen::VectorXd>& y, Index s,
                     const SolverConfig& config, const Eigen::VectorXd& x0) {
  if (!(config.beta > 0.0) || config.beta > 1.0) {
    throw std::invalid_argument("sam_solve: beta must lie in (0, 1]");
  }
  if (config.inner_rounds < 1) {
    throw std::invalid_argument("sam_solve: inner_rounds must be >= 1");
  }
  if (config.max_outer_iters < 1) {
    throw std::invalid_argument("sam_solve: max_outer_iters must be >= 1");
  }
  if (!(config.tol >= 0.0)) {
    throw std::invalid_argument("sam_solve: tol must be >= 0");
  }
  if (s < 1 || s > A.cols()) {
    throw std::invalid_argument("sam_solve: require 1 <= s <= cols(A)");
  }
  if (y.size() != A.rows()) {
    throw std::invalid_argument("sam_solve: y dimension mismatch");
  }
  if (x0.size() != A.cols()) {
    throw std::invalid_argument("sam_solve: x0 dimension mismatch");
  }
  if (s > A.rows()) {
    throw std::invalid_argument("sam_solve: need at least s measurement rows");
  }
}

long count_sign_mismatches(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  long mismatches = 0;
  for (Index i = 0; i < a.size(); ++i) {
    if ((a[i] >= 0.0) != (b[i] >= 0.0)) {
      ++mismatches;
    }
  }
  return mismatches;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kTolReached:
      return "tol-reached";
    case Termination::kMaxIterations:
      return "max-iters";
    case Termination::kExactFixedPoint:
      return "exact-fixed-point";
  }
  return "unknown";
}

Eigen::VectorXd sign_vector(const Eigen::Ref<const Eigen::VectorXd>& v) {
  Eigen::VectorXd out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    out[i] = v[i] >= 0.0 ? 1.0 : -1.0;
  }
  return out;
}

SolverResult sam_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                       const Eigen::Ref<const Eigen::VectorXd>& y, Index s,
                       const SolverConfig& config, const Eigen::VectorXd& x0,
                       const Eigen::VectorXd* truth) {
  validate_inputs(A, y, s, config, x0);
  const Index m = A.rows();
  const Index n = A.cols();
  if (truth != nullptr && truth->size() != n) {
    throw std::invalid_argument("sam_solve: truth dimension mismatch");
  }

  RandomStream subset_rng = RandomStream(config.seed).derive(kSubsetStream);
  Eigen::VectorXd truth_products;
  if (truth != nullptr) {
    truth_products = A * (*truth);
  }

  SolverResult result;
  result.trace.reserve(static_cast<std::size_t>(config.max_outer_iters));
  if (config.record_iterates) {
    result.iterates.push_back(x0);
  }

  // One signed-LS update on the given rows; scale is the gradient step size.
  const auto update = [&](const Eigen::Ref<const Eigen::MatrixXd>& A_it,
                          const Eigen::Ref<const Eigen::VectorXd>& y_it,
                          const Eigen::VectorXd& x, double scale) {
    const Eigen::VectorXd phases = sign_vector(A_it * x);
    const Eigen::VectorXd y_signed = phases.cwiseProduct(y_it);
    const Eigen::VectorXd start = config.inner_start == InnerStart::kOuterIterate
                                      ? x
                                      : Eigen::VectorXd::Zero(n);
    return htp_solve(A_it, y_signed, s, config.inner_rounds, start, scale);
  };

  Eigen::VectorXd x = x0;
  Eigen::MatrixXd A_sub;
  Eigen::VectorXd y_sub;
  result.termination = Termination::kMaxIterations;
  for (int k = 1; k <= config.max_outer_iters; ++k) {
    // Draw the row subset; a draw smaller than s cannot support the
    // normal equations, so redraw once and then fall back to the full set.
    bool full_set = config.beta == 1.0;
    bool fallback = false;
    std::vector<Index> indices;
    if (!full_set) {
      indices = bernoulli_subsample(m, config.beta, subset_rng).indices;
      if (static_cast<Index>(indices.size()) < s) {
        indices = bernoulli_subsample(m, config.beta, subset_rng).indices;
      }
      if (static_cast<Index>(indices.size()) < s) {
        full_set = true;
        fallback = true;
      }
    }

    Eigen::VectorXd x_next;
    Index subset_size = m;
    if (full_set) {
      x_next = update(A, y, x, 1.0 / static_cast<double>(m));
    } else {
      subset_size = static_cast<Index>(indices.size());
      A_sub = A(indices, Eigen::all);
      y_sub = y(indices);
      x_next = update(A_sub, y_sub, x,
                      1.0 / (config.beta * static_cast<double>(m)));
    }

    const double denom = x.norm();
    const double change = (x_next - x).norm();

    IterationTrace entry;
    entry.iteration = k;
    entry.change_is_absolute = !(denom > 0.0);
    entry.change = entry.change_is_absolute ? change : change / denom;
    entry.subset_size = subset_size;
    entry.subset_fallback = fallback;
    if (truth != nullptr) {
      entry.dist_to_truth = dist(x_next, *truth);
      entry.sign_mismatches = count_sign_mismatches(A * x, truth_products);
    }
    result.trace.push_back(entry);

    x = std::move(x_next);
    if (config.record_iterates) {
      result.iterates.push_back(x);
    }
    result.iterations = k;
    if (entry.change <= config.tol) {
      result.termination = change == 0.0 ? Termination::kExactFixedPoint
                                         : Termination::kTolReached;
      break;
    }
  }

  result.estimate = std::move(x);
  return result;
}

SolverResult altmin_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                          const Eigen::Ref<const Eigen::VectorXd>& y, Index s,
                          const SolverConfig& config, const Eigen::VectorXd& x0,
                          const Eigen::VectorXd* truth) {
  SolverConfig full = config;
  full.beta = 1.0;
  return sam_solve(A, y, s, full, x0, truth);
}

PipelineResult run_sam_pipeline(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                const Eigen::Ref<const Eigen::VectorXd>& y,
                                Index s, const SolverConfig& config,
                                PowerIterationConfig power,
                                const Eigen::VectorXd* truth) {
  PipelineResult out;
  out.init = spectral_initialize(A, y, s, power);
  out.solve = sam_solve(A, y, s, config, out.init.x0, truth);
  return out;
}

}  // namespace spr
