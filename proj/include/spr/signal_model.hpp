#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "spr/rng.hpp"

namespace spr {

using Index = Eigen::Index;

// s-sparse ground truth together with its support (sorted ascending).
struct SparseSignal {
  Index n = 0;
  Index s = 0;
  std::vector<Index> support;
  Eigen::VectorXd values;  // length n, zero off the support

  double norm() const { return values.norm(); }
};

// Dense m x n measurement operator with i.i.d. N(0,1) entries.
struct SensingMatrix {
  Eigen::MatrixXd entries;

  Index rows() const { return entries.rows(); }
  Index cols() const { return entries.cols(); }
};

// Magnitude-only measurements; `noisy` (which may go negative) is present iff
// sigma > 0. Solvers consume `observed()`.
struct MeasurementVector {
  Eigen::VectorXd clean;
  std::optional<Eigen::VectorXd> noisy;
  double sigma = 0.0;

  const Eigen::VectorXd& observed() const { return noisy ? *noisy : clean; }
  Index size() const { return clean.size(); }
};

// Row subset of [0, m), sorted ascending, plus the inclusion probability that
// produced it.
struct IndexSubset {
  std::vector<Index> indices;
  double beta = 1.0;

  Index size() const { return static_cast<Index>(indices.size()); }
};

// One fully reproducible experiment input.
struct ProblemInstance {
  SparseSignal signal;
  SensingMatrix matrix;
  MeasurementVector measurements;
  std::uint64_t seed = 0;
};

// Uniformly random s-subset support, i.i.d. N(0,1) values on it.
SparseSignal generate_sparse_signal(Index n, Index s, RandomStream& rng);

// i.i.d. N(0,1) entries, filled in column-major order.
SensingMatrix generate_sensing_matrix(Index m, Index n, RandomStream& rng);

// Magnitude measurements |A x|.
Eigen::VectorXd measure(const SensingMatrix& A, const Eigen::VectorXd& x);

// y + sigma * eps with eps i.i.d. N(0,1); sigma == 0 returns y unchanged.
Eigen::VectorXd add_noise(const Eigen::VectorXd& y, double sigma,
                          RandomStream& rng);

// Independent Bernoulli(beta) inclusion per index; beta == 1 short-circuits to
// the full set without consuming any draws.
IndexSubset bernoulli_subsample(Index m, double beta, RandomStream& rng);

// Deterministic instance from a single seed: signal, matrix and noise use
// independent derived streams.
ProblemInstance make_problem_instance(Index n, Index m, Index s, double sigma,
                                      std::uint64_t seed);

}  // namespace spr
