#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "spr/init.hpp"
#include "spr/signal_model.hpp"

namespace spr {

enum class InnerStart {
  kOuterIterate,  // warm-start the inner solver at the current iterate
  kZero,          // cold-start at the origin
};

enum class Termination {
  kTolReached,       // relative change dropped to tol or below
  kMaxIterations,    // iteration budget exhausted
  kExactFixedPoint,  // consecutive iterates bit-identical
};

const char* to_string(Termination t);

struct SolverConfig {
  double beta = 1.0;          // Bernoulli row-sampling rate, (0, 1]
  int inner_rounds = 3;       // HTP rounds per outer iteration
  int max_outer_iters = 200;  // outer iteration budget
  double tol = 1e-3;          // relative-change stopping tolerance
  InnerStart inner_start = InnerStart::kOuterIterate;
  std::uint64_t seed = 0;     // subset-sampling stream
  bool record_iterates = false;  // keep every outer iterate in the result
};

// One outer iteration, as observed from outside: iteration k consumed iterate
// x_{k-1} and produced x_k.
struct IterationTrace {
  int iteration = 0;  // 1-based
  double change = 0.0;
  bool change_is_absolute = false;  // true when ||x_{k-1}|| was zero
  Index subset_size = 0;
  bool subset_fallback = false;  // degenerate draw replaced by the full set
  // Filled only when the caller supplies the ground truth:
  double dist_to_truth = std::numeric_limits<double>::quiet_NaN();
  long sign_mismatches = -1;  // of the consumed iterate, over all m rows
};

struct SolverResult {
  Eigen::VectorXd estimate;  // most recent iterate
  int iterations = 0;
  Termination termination = Termination::kMaxIterations;
  std::vector<IterationTrace> trace;
  std::vector<Eigen::VectorXd> iterates;  // filled iff record_iterates
};

// Entrywise sign with sgn(0) = +1.
Eigen::VectorXd sign_vector(const Eigen::Ref<const Eigen::VectorXd>& v);

// Stochastic alternating minimization for y ~ |A x|: each outer iteration
// draws a Bernoulli(beta) row subset, assigns the measurements the signs of
// A_I x_k, and runs `inner_rounds` HTP rounds on the signed subproblem with
// gradient scale 1/(beta m). Stops when the relative change falls to tol or
// the iteration budget runs out. `truth`, when given, only enriches the trace.
SolverResult sam_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                       const Eigen::Ref<const Eigen::VectorXd>& y, Index s,
                       const SolverConfig& config, const Eigen::VectorXd& x0,
                       const Eigen::VectorXd* truth = nullptr);

// Deterministic alternating minimization: sam_solve with beta = 1 (full row
// set every iteration, no randomness consumed).
SolverResult altmin_solve(const Eigen::Ref<const Eigen::MatrixXd>& A,
                          const Eigen::Ref<const Eigen::VectorXd>& y, Index s,
                          const SolverConfig& config, const Eigen::VectorXd& x0,
                          const Eigen::VectorXd* truth = nullptr);

struct PipelineResult {
  InitResult init;
  SolverResult solve;
};

// Spectral initialization followed by sam_solve.
PipelineResult run_sam_pipeline(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                const Eigen::Ref<const Eigen::VectorXd>& y,
                                Index s, const SolverConfig& config,
                                PowerIterationConfig power = {},
                                const Eigen::VectorXd* truth = nullptr);

}  // namespace spr
