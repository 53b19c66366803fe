#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "spr/metrics.hpp"
#include "spr/signal_model.hpp"

namespace spr::bench {

inline constexpr const char* kArtifactVersion = "0.1.0";

// CSV column schema, fixed for downstream tooling.
inline constexpr const char* kCsvHeader =
    "algo,n,m,s,beta,L,sigma,seed,success,rel_error,iterations,wall_time_s";

enum class Algorithm { kSam, kAltMin };

const char* to_string(Algorithm a);

// Noisy runs loosen both the stopping tolerance and the success gate by the
// noise level: an estimate cannot be expected closer than the noise floor.
inline double stopping_tol(double sigma) { return kSuccessThreshold + sigma; }
inline double success_threshold(double sigma) {
  return kSuccessThreshold + sigma;
}

struct TrialParams {
  Algorithm algo = Algorithm::kSam;
  Index n = 0;
  Index m = 0;
  Index s = 0;
  double beta = 0.6;
  int inner_rounds = 3;
  double sigma = 0.0;
  int max_outer_iters = 200;
};

struct TrialRecord {
  TrialParams params;
  std::uint64_t seed = 0;
  bool success = false;
  double rel_error = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double wall_time_s = 0.0;
  double init_rel_dist = std::numeric_limits<double>::quiet_NaN();
  double snr_db = std::numeric_limits<double>::quiet_NaN();  // noisy runs only
  std::string failure;  // exception text when the trial aborted; else empty
};

// Independent per-trial stream: mixes the master seed with the cell
// coordinates and the trial index.
std::uint64_t trial_seed(std::uint64_t master, std::size_t cell_i,
                         std::size_t cell_j, std::size_t trial);

// Generates the seeded instance, runs spectral init + solver, and scores the
// estimate. Wall time covers init + solve only, not instance generation.
TrialRecord run_trial(const TrialParams& params, std::uint64_t seed);

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

struct GridCell {
  std::size_t i = 0, j = 0;  // indices into axis1 / axis2
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  // Over successes only; NaN when a cell has none.
  double mean_rel_error = std::numeric_limits<double>::quiet_NaN();
  // Over all completed trials.
  double mean_wall_time_s = std::numeric_limits<double>::quiet_NaN();
  double mean_snr_db = std::numeric_limits<double>::quiet_NaN();
};

struct GridSummary {
  std::string kind;
  GridAxis axis1;
  GridAxis axis2;               // singleton axis when the sweep is 1-D
  std::vector<GridCell> cells;  // row-major, axis1-major
  std::vector<TrialRecord> records;  // cell-major, trial-minor
  std::uint64_t master_seed = 0;
  std::map<std::string, std::string> config;  // effective config echo
};

using Progress = std::function<void(std::size_t done, std::size_t total)>;

// Success rate vs m for each beta, at fixed (n, s). Axes: (m, beta).
GridSummary recovery_curve(Index n, Index s, const std::vector<Index>& m_list,
                           const std::vector<double>& beta_list, int trials,
                           std::uint64_t master_seed, int workers,
                           const Progress& progress = {});

// Success rate over the (s, m) plane at fixed beta. Axes: (s, m).
GridSummary phase_transition_grid(Index n, const std::vector<Index>& s_list,
                                  const std::vector<Index>& m_list, double beta,
                                  int trials, std::uint64_t master_seed,
                                  int workers, const Progress& progress = {});

// Mean relative error (successes only) and SNR per noise level. Axis: sigma.
GridSummary noise_sweep(Index n, Index m, Index s, double beta,
                        const std::vector<double>& sigma_list, int trials,
                        std::uint64_t master_seed, int workers,
                        const Progress& progress = {});

// Subsampled solver vs full-set solver at matched parameters. Axis:
// algorithm (0 = sam, 1 = altmin).
GridSummary timing_table(Index n, Index m, Index s, double beta, double sigma,
                         int trials, std::uint64_t master_seed, int workers,
                         const Progress& progress = {});

// One row per record under the fixed header; '.' decimal separator, UTF-8.
void write_records_csv(std::ostream& out,
                       const std::vector<TrialRecord>& records);
std::string records_csv(const std::vector<TrialRecord>& records);

// Full summary (axes, per-cell stats, config echo, master seed, artifact
// version) serialized as JSON.
std::string summary_json(const GridSummary& summary);

// Worker budget: `requested` if positive, else SPARSE_PR_WORKERS, else
// hardware concurrency.
int resolve_workers(int requested);

struct PhasePreset {
  Index n = 0;
  std::vector<Index> s_list;
  std::vector<Index> m_list;
  double beta = 0.6;
  int trials = 0;
};

// Minutes-scale preset: s in {5,15,25}, m in {200,500,800,1100}, 20 trials.
PhasePreset desk_phase_preset();
// Full grid: s in {5..50 step 5}, m in {200..1200 step 100}, 100 trials.
PhasePreset paper_phase_preset();

}  // namespace spr::bench
