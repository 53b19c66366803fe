#include "spr/signal_model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spr {
namespace {

// Stream keys for the per-component substreams of an instance seed.
constexpr std::uint64_t kSignalStream = 1;
constexpr std::uint64_t kMatrixStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

void check_positive(Index v, const char* name) {
  if (v < 1) {
    throw std::invalid_argument(std::string(name) + " must be >= 1");
  }
}

}  // namespace

SparseSignal generate_sparse_signal(Index n, Index s, RandomStream& rng) {
  check_positive(n, "n");
  if (s < 1 || s > n) {
    throw std::invalid_argument("sparsity s must satisfy 1 <= s <= n");
  }
  // Uniform s-subset via a partial Fisher-Yates shuffle.
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = 0; i < s; ++i) {
    const Index j =
        i + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  SparseSignal sig;
  sig.n = n;
  sig.s = s;
  sig.support.assign(perm.begin(), perm.begin() + s);
  std::sort(sig.support.begin(), sig.support.end());
  sig.values = Eigen::VectorXd::Zero(n);
  for (Index idx : sig.support) {
    sig.values[idx] = rng.normal();
  }
  return sig;
}

SensingMatrix generate_sensing_matrix(Index m, Index n, RandomStream& rng) {
  check_positive(m, "m");
  check_positive(n, "n");
  SensingMatrix A;
  A.entries.resize(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) {
      A.entries(i, j) = rng.normal();
    }
  }
  return A;
}

Eigen::VectorXd measure(const SensingMatrix& A, const Eigen::VectorXd& x) {
  if (x.size() != A.cols()) {
    throw std::invalid_argument("measure: x dimension does not match matrix");
  }
  return (A.entries * x).cwiseAbs();
}

Eigen::VectorXd add_noise(const Eigen::VectorXd& y, double sigma,
                          RandomStream& rng) {
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("noise level sigma must be >= 0");
  }
  if (sigma == 0.0) {
    return y;
  }
  Eigen::VectorXd noisy = y;
  for (Index i = 0; i < noisy.size(); ++i) {
    noisy[i] += sigma * rng.normal();
  }
  return noisy;
}

IndexSubset bernoulli_subsample(Index m, double beta, RandomStream& rng) {
  check_positive(m, "m");
  if (!(beta > 0.0) || beta > 1.0) {
    throw std::invalid_argument("sampling rate beta must lie in (0, 1]");
  }
  IndexSubset subset;
  subset.beta = beta;
  if (beta == 1.0) {
    // Full set; deliberately consumes no randomness so beta = 1 runs are
    // seed-independent.
    subset.indices.resize(static_cast<std::size_t>(m));
    std::iota(subset.indices.begin(), subset.indices.end(), Index{0});
    return subset;
  }
  for (Index i = 0; i < m; ++i) {
    if (rng.uniform() < beta) {
      subset.indices.push_back(i);
    }
  }
  return subset;
}

ProblemInstance make_problem_instance(Index n, Index m, Index s, double sigma,
                                      std::uint64_t seed) {
  RandomStream root(seed);
  RandomStream signal_rng = root.derive(kSignalStream);
  RandomStream matrix_rng = root.derive(kMatrixStream);
  RandomStream noise_rng = root.derive(kNoiseStream);

  ProblemInstance inst;
  inst.seed = seed;
  inst.signal = generate_sparse_signal(n, s, signal_rng);
  inst.matrix = generate_sensing_matrix(m, n, matrix_rng);
  inst.measurements.clean = measure(inst.matrix, inst.signal.values);
  inst.measurements.sigma = sigma;
  if (sigma > 0.0) {
    inst.measurements.noisy = add_noise(inst.measurements.clean, sigma, noise_rng);
  }
  return inst;
}

}  // namespace spr
