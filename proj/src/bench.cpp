#include "spr/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "spr/solvers.hpp"

namespace spr::bench {
namespace {

constexpr std::uint64_t kInstanceStream = 11;
constexpr std::uint64_t kSolverStream = 12;

void check_params(const TrialParams& p) {
  if (p.n < 1 || p.m < 1 || p.s < 1 || p.s > p.n) {
    throw std::invalid_argument("run_trial: bad dimensions");
  }
  if (!(p.beta > 0.0) || p.beta > 1.0) {
    throw std::invalid_argument("run_trial: beta must lie in (0, 1]");
  }
  if (!(p.sigma >= 0.0)) {
    throw std::invalid_argument("run_trial: sigma must be >= 0");
  }
  if (p.inner_rounds < 1 || p.max_outer_iters < 1) {
    throw std::invalid_argument("run_trial: bad iteration budgets");
  }
}

// Executes fn(0..count-1) on up to `workers` threads. Tasks write only their
// own output slot, so the schedule never affects the results.
void run_tasks(std::size_t count, int workers,
               const std::function<void(std::size_t)>& fn,
               const Progress& progress) {
  workers = std::max(1, workers);
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
      if (progress) progress(i + 1, count);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) break;
      fn(i);
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(d, count);
      }
    }
  };
  std::vector<std::thread> pool;
  const int spawn = std::min<std::size_t>(workers, count);
  pool.reserve(static_cast<std::size_t>(spawn));
  for (int t = 0; t < spawn; ++t) {
    pool.emplace_back(worker);
  }
  for (auto& th : pool) {
    th.join();
  }
}

// Shared sweep skeleton: axis1 x axis2 cells, `trials` records per cell in
// canonical (cell-major, trial-minor) order, then per-cell aggregation.
GridSummary run_grid(std::string kind, GridAxis axis1, GridAxis axis2,
                     int trials, std::uint64_t master_seed, int workers,
                     const std::function<TrialParams(std::size_t, std::size_t)>&
                         cell_params,
                     const std::function<std::uint64_t(
                         std::size_t, std::size_t, std::size_t)>& seed_of,
                     const Progress& progress) {
  if (trials < 1) {
    throw std::invalid_argument(kind + ": trials must be >= 1");
  }
  if (axis1.values.empty()) {
    throw std::invalid_argument(kind + ": empty " + axis1.name + " axis");
  }
  const std::size_t len1 = axis1.values.size();
  const std::size_t len2 = std::max<std::size_t>(1, axis2.values.size());

  GridSummary out;
  out.kind = std::move(kind);
  out.axis1 = std::move(axis1);
  out.axis2 = std::move(axis2);
  out.master_seed = master_seed;
  out.records.resize(len1 * len2 * static_cast<std::size_t>(trials));

  const std::size_t per_cell = static_cast<std::size_t>(trials);
  run_tasks(
      out.records.size(), workers,
      [&](std::size_t task) {
        const std::size_t cell = task / per_cell;
        const std::size_t trial = task % per_cell;
        const std::size_t i = cell / len2;
        const std::size_t j = cell % len2;
        out.records[task] = run_trial(cell_params(i, j), seed_of(i, j, trial));
      },
      progress);

  out.cells.resize(len1 * len2);
  for (std::size_t cell = 0; cell < out.cells.size(); ++cell) {
    GridCell& c = out.cells[cell];
    c.i = cell / len2;
    c.j = cell % len2;
    c.trials = trials;
    double err_sum = 0.0;
    double time_sum = 0.0;
    double snr_sum = 0.0;
    int timed = 0;
    int with_snr = 0;
    for (std::size_t t = 0; t < per_cell; ++t) {
      const TrialRecord& r = out.records[cell * per_cell + t];
      if (r.success) {
        ++c.successes;
        err_sum += r.rel_error;
      }
      if (r.failure.empty()) {
        time_sum += r.wall_time_s;
        ++timed;
      }
      if (std::isfinite(r.snr_db)) {
        snr_sum += r.snr_db;
        ++with_snr;
      }
    }
    c.success_rate = static_cast<double>(c.successes) / trials;
    if (c.successes > 0) c.mean_rel_error = err_sum / c.successes;
    if (timed > 0) c.mean_wall_time_s = time_sum / timed;
    if (with_snr > 0) c.mean_snr_db = snr_sum / with_snr;
  }
  return out;
}

std::vector<double> to_doubles(const std::vector<Index>& v) {
  return {v.begin(), v.end()};
}

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt(v[i], "%g");
  }
  return out;
}

}  // namespace

const char* to_string(Algorithm a) {
  return a == Algorithm::kSam ? "sam" : "altmin";
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t cell_i,
                         std::size_t cell_j, std::size_t trial) {
  return derive_seed(master, cell_i, cell_j, trial);
}

TrialRecord run_trial(const TrialParams& params, std::uint64_t seed) {
  check_params(params);
  TrialRecord rec;
  rec.params = params;
  rec.seed = seed;
  try {
    const ProblemInstance inst = make_problem_instance(
        params.n, params.m, params.s, params.sigma,
        derive_seed(seed, kInstanceStream));
    const Eigen::VectorXd& y = inst.measurements.observed();

    SolverConfig config;
    config.beta = params.algo == Algorithm::kAltMin ? 1.0 : params.beta;
    config.inner_rounds = params.inner_rounds;
    config.max_outer_iters = params.max_outer_iters;
    config.tol = stopping_tol(params.sigma);
    config.seed = derive_seed(seed, kSolverStream);

    const auto t0 = std::chrono::steady_clock::now();
    const PipelineResult pipeline =
        run_sam_pipeline(inst.matrix.entries, y, params.s, config);
    const auto t1 = std::chrono::steady_clock::now();
    rec.wall_time_s = std::chrono::duration<double>(t1 - t0).count();

    const RecoveryAssessment assessment =
        assess_recovery(pipeline.solve.estimate, inst.signal.values,
                        success_threshold(params.sigma));
    rec.success = assessment.success;
    rec.rel_error = assessment.rel_error;
    rec.iterations = pipeline.solve.iterations;
    rec.init_rel_dist =
        dist(pipeline.init.x0, inst.signal.values) / inst.signal.norm();
    if (params.sigma > 0.0) {
      const double signal_power =
          inst.measurements.clean.squaredNorm() / static_cast<double>(params.m);
      rec.snr_db = 10.0 * std::log10(signal_power / (params.sigma * params.sigma));
    }
  } catch (const std::exception& e) {
    rec.failure = e.what();
    rec.success = false;
  }
  return rec;
}

GridSummary recovery_curve(Index n, Index s, const std::vector<Index>& m_list,
                           const std::vector<double>& beta_list, int trials,
                           std::uint64_t master_seed, int workers,
                           const Progress& progress) {
  if (beta_list.empty()) {
    throw std::invalid_argument("recovery_curve: empty beta axis");
  }
  GridSummary out = run_grid(
      "recovery-curve", {"m", to_doubles(m_list)}, {"beta", beta_list}, trials,
      master_seed, workers,
      [&](std::size_t i, std::size_t j) {
        TrialParams p;
        p.algo = Algorithm::kSam;
        p.n = n;
        p.m = m_list[i];
        p.s = s;
        p.beta = beta_list[j];
        return p;
      },
      [&](std::size_t i, std::size_t j, std::size_t t) {
        return trial_seed(master_seed, i, j, t);
      },
      progress);
  out.config = {{"n", std::to_string(n)},
                {"s", std::to_string(s)},
                {"m_list", join(to_doubles(m_list))},
                {"beta_list", join(beta_list)},
                {"trials", std::to_string(trials)},
                {"seed", std::to_string(master_seed)}};
  return out;
}

GridSummary phase_transition_grid(Index n, const std::vector<Index>& s_list,
                                  const std::vector<Index>& m_list, double beta,
                                  int trials, std::uint64_t master_seed,
                                  int workers, const Progress& progress) {
  if (m_list.empty()) {
    throw std::invalid_argument("phase_transition_grid: empty m axis");
  }
  GridSummary out = run_grid(
      "phase-transition", {"s", to_doubles(s_list)}, {"m", to_doubles(m_list)},
      trials, master_seed, workers,
      [&](std::size_t i, std::size_t j) {
        TrialParams p;
        p.algo = Algorithm::kSam;
        p.n = n;
        p.m = m_list[j];
        p.s = s_list[i];
        p.beta = beta;
        return p;
      },
      [&](std::size_t i, std::size_t j, std::size_t t) {
        return trial_seed(master_seed, i, j, t);
      },
      progress);
  out.config = {{"n", std::to_string(n)},
                {"s_list", join(to_doubles(s_list))},
                {"m_list", join(to_doubles(m_list))},
                {"beta", fmt(beta, "%g")},
                {"trials", std::to_string(trials)},
                {"seed", std::to_string(master_seed)}};
  return out;
}

GridSummary noise_sweep(Index n, Index m, Index s, double beta,
                        const std::vector<double>& sigma_list, int trials,
                        std::uint64_t master_seed, int workers,
                        const Progress& progress) {
  GridSummary out = run_grid(
      "noise-sweep", {"sigma", sigma_list}, {"", {}}, trials, master_seed,
      workers,
      [&](std::size_t i, std::size_t) {
        TrialParams p;
        p.algo = Algorithm::kSam;
        p.n = n;
        p.m = m;
        p.s = s;
        p.beta = beta;
        p.sigma = sigma_list[i];
        return p;
      },
      [&](std::size_t i, std::size_t j, std::size_t t) {
        return trial_seed(master_seed, i, j, t);
      },
      progress);
  out.config = {{"n", std::to_string(n)},
                {"m", std::to_string(m)},
                {"s", std::to_string(s)},
                {"beta", fmt(beta, "%g")},
                {"sigma_list", join(sigma_list)},
                {"trials", std::to_string(trials)},
                {"seed", std::to_string(master_seed)}};
  return out;
}

GridSummary timing_table(Index n, Index m, Index s, double beta, double sigma,
                         int trials, std::uint64_t master_seed, int workers,
                         const Progress& progress) {
  GridSummary out = run_grid(
      "timing", {"algorithm", {0.0, 1.0}}, {"", {}}, trials, master_seed,
      workers,
      [&](std::size_t i, std::size_t) {
        TrialParams p;
        p.algo = i == 0 ? Algorithm::kSam : Algorithm::kAltMin;
        p.n = n;
        p.m = m;
        p.s = s;
        p.beta = beta;
        p.sigma = sigma;
        return p;
      },
      // Matched-pair design: both algorithms see the same instances.
      [&](std::size_t, std::size_t, std::size_t t) {
        return trial_seed(master_seed, 0, 0, t);
      },
      progress);
  out.config = {{"n", std::to_string(n)},
                {"m", std::to_string(m)},
                {"s", std::to_string(s)},
                {"beta", fmt(beta, "%g")},
                {"sigma", fmt(sigma, "%g")},
                {"trials", std::to_string(trials)},
                {"seed", std::to_string(master_seed)}};
  return out;
}

void write_records_csv(std::ostream& out,
                       const std::vector<TrialRecord>& records) {
  out << kCsvHeader << "\n";
  for (const TrialRecord& r : records) {
    out << to_string(r.params.algo) << ',' << r.params.n << ',' << r.params.m
        << ',' << r.params.s << ',' << fmt(r.params.beta, "%g") << ','
        << r.params.inner_rounds << ',' << fmt(r.params.sigma, "%g") << ','
        << r.seed << ',' << (r.success ? 1 : 0) << ','
        << fmt(r.rel_error, "%.12e") << ',' << r.iterations << ','
        << fmt(r.wall_time_s, "%.6f") << "\n";
  }
}

std::string records_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  write_records_csv(out, records);
  return out.str();
}

std::string summary_json(const GridSummary& summary) {
  nlohmann::json j;
  j["artifact_version"] = kArtifactVersion;
  j["kind"] = summary.kind;
  j["master_seed"] = summary.master_seed;
  j["config"] = summary.config;
  nlohmann::json axes = nlohmann::json::array();
  axes.push_back({{"name", summary.axis1.name}, {"values", summary.axis1.values}});
  if (!summary.axis2.values.empty()) {
    axes.push_back(
        {{"name", summary.axis2.name}, {"values", summary.axis2.values}});
  }
  j["axes"] = axes;
  nlohmann::json cells = nlohmann::json::array();
  for (const GridCell& c : summary.cells) {
    nlohmann::json jc;
    jc[summary.axis1.name] = summary.axis1.values[c.i];
    if (!summary.axis2.values.empty()) {
      jc[summary.axis2.name] = summary.axis2.values[c.j];
    }
    jc["trials"] = c.trials;
    jc["successes"] = c.successes;
    jc["success_rate"] = c.success_rate;
    jc["mean_rel_error"] = std::isfinite(c.mean_rel_error)
                               ? nlohmann::json(c.mean_rel_error)
                               : nlohmann::json(nullptr);
    jc["mean_wall_time_s"] = std::isfinite(c.mean_wall_time_s)
                                 ? nlohmann::json(c.mean_wall_time_s)
                                 : nlohmann::json(nullptr);
    if (std::isfinite(c.mean_snr_db)) {
      jc["mean_snr_db"] = c.mean_snr_db;
    }
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

int resolve_workers(int requested) {
  if (requested > 0) {
    return requested;
  }
  if (const char* env = std::getenv("SPARSE_PR_WORKERS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) {
      return parsed;
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

PhasePreset desk_phase_preset() {
  return {1000, {5, 15, 25}, {200, 500, 800, 1100}, 0.6, 20};
}

PhasePreset paper_phase_preset() {
  PhasePreset p;
  p.n = 1000;
  for (Index s = 5; s <= 50; s += 5) p.s_list.push_back(s);
  for (Index m = 200; m <= 1200; m += 100) p.m_list.push_back(m);
  p.beta = 0.6;
  p.trials = 100;
  return p;
}

}  // namespace spr::bench
