// sparsepr: sparse phase retrieval experiment driver.
//
// Subcommands: solve, recovery-curve, phase-transition, noise-sweep, timing.
// Every run is reproducible from --seed; sweeps write a records CSV plus a
// JSON summary into --out and echo the summary JSON on stdout. Progress goes
// to stderr. Exit codes: 0 ok, 1 configuration error, 2 runtime failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spr/bench.hpp"
#include "spr/metrics.hpp"
#include "spr/solvers.hpp"

namespace {

using nlohmann::json;
using spr::Index;

// Flat key-value JSON config file; command-line flags override its values.
struct ConfigFile {
  json values = json::object();
  bool loaded = false;

  static ConfigFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw std::invalid_argument("config file not readable: " + path);
    }
    ConfigFile cfg;
    try {
      in >> cfg.values;
    } catch (const json::exception& e) {
      throw std::invalid_argument("config file is not valid JSON: " +
                                  std::string(e.what()));
    }
    if (!cfg.values.is_object()) {
      throw std::invalid_argument("config file must be a JSON object");
    }
    for (const auto& [key, value] : cfg.values.items()) {
      if (value.is_object() || value.is_array()) {
        throw std::invalid_argument(
            "config file must be flat (key \"" + key + "\" is nested)");
      }
    }
    cfg.loaded = true;
    return cfg;
  }

  template <typename T>
  void apply(const char* key, T& target) const {
    if (!loaded || !values.contains(key)) {
      return;
    }
    try {
      target = values.at(key).get<T>();
    } catch (const json::exception&) {
      throw std::invalid_argument("config key \"" + std::string(key) +
                                  "\" has the wrong type");
    }
  }
};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) {
      throw std::invalid_argument("bad list entry: \"" + item + "\"");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw std::invalid_argument("empty list: \"" + text + "\"");
  }
  return out;
}

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  for (double v : parse_double_list(text)) {
    const Index i = static_cast<Index>(v);
    if (static_cast<double>(i) != v || i < 1) {
      throw std::invalid_argument("list entries must be positive integers: \"" +
                                  text + "\"");
    }
    out.push_back(i);
  }
  return out;
}

spr::bench::Progress stderr_progress(const std::string& label) {
  return [label](std::size_t done, std::size_t total) {
    const std::size_t step = std::max<std::size_t>(1, total / 20);
    if (done % step == 0 || done == total) {
      std::fprintf(stderr, "[%s] %zu/%zu trials\n", label.c_str(), done, total);
    }
  };
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  out << body;
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

void emit_summary(spr::bench::GridSummary& summary,
                  const std::map<std::string, std::string>& extra_config,
                  const std::string& out_dir, const std::string& stem) {
  for (const auto& [k, v] : extra_config) {
    summary.config[k] = v;
  }
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / (stem + "_records.csv"),
             spr::bench::records_csv(summary.records));
  const std::string summary_text = spr::bench::summary_json(summary);
  write_file(dir / (stem + "_summary.json"), summary_text);
  std::cout << summary_text;
  std::fprintf(stderr, "[%s] wrote %s and %s\n", summary.kind.c_str(),
               (dir / (stem + "_records.csv")).c_str(),
               (dir / (stem + "_summary.json")).c_str());
}

// Options shared by every subcommand.
struct CommonOpts {
  std::uint64_t seed = 1;
  int workers = 0;  // 0: SPARSE_PR_WORKERS env var, then hardware
  std::string out_dir = ".";
  bool paper_scale = false;
  std::string config_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--seed", opts.seed, "master seed; all randomness derives from it");
  cmd->add_option("--workers", opts.workers,
                  "worker threads (0: SPARSE_PR_WORKERS env var, then hardware)");
  cmd->add_option("--out", opts.out_dir, "output directory for CSV/JSON artifacts");
  cmd->add_flag("--paper-scale", opts.paper_scale,
                "run the full-size experiment instead of the desk-scale preset");
  cmd->add_option("--config", opts.config_path,
                  "flat key-value JSON config file; flags override it");
}

void apply_common(const ConfigFile& cfg, CommonOpts& opts) {
  cfg.apply("seed", opts.seed);
  cfg.apply("workers", opts.workers);
  cfg.apply("out", opts.out_dir);
  cfg.apply("paper_scale", opts.paper_scale);
}

std::map<std::string, std::string> common_config(const CommonOpts& opts,
                                                 int workers) {
  return {{"workers", std::to_string(workers)},
          {"out", opts.out_dir},
          {"paper_scale", opts.paper_scale ? "true" : "false"}};
}

int run_solve(const CommonOpts& common, Index n, Index m, Index s, double beta,
              double sigma, const std::string& algo, int inner_rounds,
              int max_outer_iters, double tol, bool tol_given) {
  if (algo != "sam" && algo != "altmin") {
    throw std::invalid_argument("--algo must be sam or altmin");
  }
  const spr::ProblemInstance inst = spr::make_problem_instance(
      n, m, s, sigma, spr::derive_seed(common.seed, 11));

  spr::SolverConfig config;
  config.beta = algo == "altmin" ? 1.0 : beta;
  config.inner_rounds = inner_rounds;
  config.max_outer_iters = max_outer_iters;
  config.tol = tol_given ? tol : spr::bench::stopping_tol(sigma);
  config.seed = spr::derive_seed(common.seed, 12);

  const auto t0 = std::chrono::steady_clock::now();
  const spr::PipelineResult result =
      spr::run_sam_pipeline(inst.matrix.entries, inst.measurements.observed(),
                            s, config, {}, &inst.signal.values);
  const auto t1 = std::chrono::steady_clock::now();

  const spr::RecoveryAssessment assessment =
      spr::assess_recovery(result.solve.estimate, inst.signal.values,
                           spr::bench::success_threshold(sigma));

  json out;
  out["command"] = "solve";
  out["artifact_version"] = spr::bench::kArtifactVersion;
  out["config"] = {{"n", n},
                   {"m", m},
                   {"s", s},
                   {"algo", algo},
                   {"beta", config.beta},
                   {"sigma", sigma},
                   {"L", config.inner_rounds},
                   {"K", config.max_outer_iters},
                   {"tol", config.tol},
                   {"seed", common.seed}};
  out["success"] = assessment.success;
  out["rel_error"] = assessment.rel_error;
  out["distance"] = assessment.distance;
  out["success_threshold"] = assessment.threshold;
  out["iterations"] = result.solve.iterations;
  out["termination"] = spr::to_string(result.solve.termination);
  out["wall_time_s"] = std::chrono::duration<double>(t1 - t0).count();
  out["init"] = {{"rel_dist", spr::dist(result.init.x0, inst.signal.values) /
                                  inst.signal.norm()},
                 {"power_iters", result.init.power_iters_used},
                 {"eig_residual", result.init.eig_residual},
                 {"converged", result.init.converged}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse phase retrieval solver and Monte-Carlo benchmarks"};
  app.set_version_flag("--version", spr::bench::kArtifactVersion);
  app.require_subcommand(1);

  // Pre-scan for --config so file values become defaults before parsing.
  ConfigFile cfg;
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        cfg = ConfigFile::load(argv[i + 1]);
      } else if (arg.rfind("--config=", 0) == 0) {
        cfg = ConfigFile::load(arg.substr(9));
      }
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  // ---- solve ----
  CommonOpts solve_common;
  Index solve_n = 200, solve_m = 600, solve_s = 5;
  double solve_beta = 0.6, solve_sigma = 0.0, solve_tol = 1e-3;
  std::string solve_algo = "sam";
  int solve_L = 3, solve_K = 200;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "recover one seeded instance end to end");
  add_common(solve_cmd, solve_common);
  solve_cmd->add_option("--n", solve_n, "signal dimension");
  solve_cmd->add_option("--m", solve_m, "measurement count");
  solve_cmd->add_option("--s", solve_s, "sparsity level");
  solve_cmd->add_option("--beta", solve_beta, "row-sampling rate in (0, 1]");
  solve_cmd->add_option("--sigma", solve_sigma, "additive noise level");
  solve_cmd->add_option("--algo", solve_algo, "sam | altmin");
  solve_cmd->add_option("--L", solve_L, "inner solver rounds per iteration");
  solve_cmd->add_option("--K", solve_K, "outer iteration budget");
  CLI::Option* solve_tol_opt =
      solve_cmd->add_option("--tol", solve_tol, "stopping tolerance (default 1e-3 + sigma)");

  // ---- recovery-curve ----
  CommonOpts curve_common;
  Index curve_n = 1000, curve_s = 15;
  std::string curve_m_list = "300,400,500,600,700";
  std::string curve_beta_list = "0.6,1.0";
  int curve_trials = 20;
  CLI::App* curve_cmd = app.add_subcommand(
      "recovery-curve", "success rate vs m for each sampling rate beta");
  add_common(curve_cmd, curve_common);
  curve_cmd->add_option("--n", curve_n, "signal dimension");
  curve_cmd->add_option("--s", curve_s, "sparsity level");
  curve_cmd->add_option("--m-list", curve_m_list, "comma-separated m values");
  curve_cmd->add_option("--beta-list", curve_beta_list,
                        "comma-separated beta values");
  CLI::Option* curve_trials_opt =
      curve_cmd->add_option("--trials", curve_trials, "trials per cell");

  // ---- phase-transition ----
  CommonOpts phase_common;
  Index phase_n = 0;  // 0: take from preset
  std::string phase_s_list, phase_m_list;
  double phase_beta = -1.0;  // <0: take from preset
  int phase_trials = 0;      // 0: take from preset
  CLI::App* phase_cmd = app.add_subcommand(
      "phase-transition", "success-rate grid over the (s, m) plane");
  add_common(phase_cmd, phase_common);
  phase_cmd->add_option("--n", phase_n, "signal dimension (default: preset)");
  phase_cmd->add_option("--s-list", phase_s_list,
                        "comma-separated sparsity levels (default: preset)");
  phase_cmd->add_option("--m-list", phase_m_list,
                        "comma-separated m values (default: preset)");
  phase_cmd->add_option("--beta", phase_beta, "row-sampling rate (default: preset)");
  phase_cmd->add_option("--trials", phase_trials,
                        "trials per cell (default: preset)");

  // ---- noise-sweep ----
  CommonOpts noise_common;
  Index noise_n = 500, noise_m = 600, noise_s = 8;
  double noise_beta = 0.6;
  std::string noise_sigma_list = "0.01,0.05,0.1";
  int noise_trials = 50;
  CLI::App* noise_cmd = app.add_subcommand(
      "noise-sweep", "mean relative error (over successes) per noise level");
  add_common(noise_cmd, noise_common);
  noise_cmd->add_option("--n", noise_n, "signal dimension");
  noise_cmd->add_option("--m", noise_m, "measurement count");
  noise_cmd->add_option("--s", noise_s, "sparsity level");
  noise_cmd->add_option("--beta", noise_beta, "row-sampling rate");
  noise_cmd->add_option("--sigma-list", noise_sigma_list,
                        "comma-separated noise levels");
  noise_cmd->add_option("--trials", noise_trials, "trials per level");

  // ---- timing ----
  CommonOpts timing_common;
  Index timing_n = 1000, timing_m = 800, timing_s = 15;
  double timing_beta = 0.6, timing_sigma = 0.0;
  int timing_trials = 20;
  CLI::App* timing_cmd = app.add_subcommand(
      "timing", "matched-instance wall-time comparison: sam vs altmin");
  add_common(timing_cmd, timing_common);
  timing_cmd->add_option("--n", timing_n, "signal dimension");
  timing_cmd->add_option("--m", timing_m, "measurement count");
  timing_cmd->add_option("--s", timing_s, "sparsity level");
  timing_cmd->add_option("--beta", timing_beta, "row-sampling rate for sam");
  timing_cmd->add_option("--sigma", timing_sigma, "additive noise level");
  CLI::Option* timing_trials_opt =
      timing_cmd->add_option("--trials", timing_trials, "paired trials");

  // Config-file values become defaults before the real parse.
  try {
    if (cfg.loaded) {
      for (CommonOpts* c : {&solve_common, &curve_common, &phase_common,
                            &noise_common, &timing_common}) {
        apply_common(cfg, *c);
      }
      cfg.apply("n", solve_n);
      cfg.apply("m", solve_m);
      cfg.apply("s", solve_s);
      cfg.apply("beta", solve_beta);
      cfg.apply("sigma", solve_sigma);
      cfg.apply("algo", solve_algo);
      cfg.apply("L", solve_L);
      cfg.apply("K", solve_K);
      cfg.apply("tol", solve_tol);
      cfg.apply("n", curve_n);
      cfg.apply("s", curve_s);
      cfg.apply("m_list", curve_m_list);
      cfg.apply("beta_list", curve_beta_list);
      cfg.apply("trials", curve_trials);
      cfg.apply("n", phase_n);
      cfg.apply("s_list", phase_s_list);
      cfg.apply("m_list", phase_m_list);
      cfg.apply("beta", phase_beta);
      cfg.apply("trials", phase_trials);
      cfg.apply("n", noise_n);
      cfg.apply("m", noise_m);
      cfg.apply("s", noise_s);
      cfg.apply("beta", noise_beta);
      cfg.apply("sigma_list", noise_sigma_list);
      cfg.apply("trials", noise_trials);
      cfg.apply("n", timing_n);
      cfg.apply("m", timing_m);
      cfg.apply("s", timing_s);
      cfg.apply("beta", timing_beta);
      cfg.apply("sigma", timing_sigma);
      cfg.apply("trials", timing_trials);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // CLI11 returns 0 for --help/--version; anything else is a usage error.
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) {
      const bool tol_given =
          solve_tol_opt->count() > 0 || (cfg.loaded && cfg.values.contains("tol"));
      return run_solve(solve_common, solve_n, solve_m, solve_s, solve_beta,
                       solve_sigma, solve_algo, solve_L, solve_K, solve_tol,
                       tol_given);
    }
    if (curve_cmd->parsed()) {
      if (curve_common.paper_scale && curve_trials_opt->count() == 0 &&
          !(cfg.loaded && cfg.values.contains("trials"))) {
        curve_trials = 100;
      }
      std::string m_list = curve_m_list;
      if (curve_common.paper_scale &&
          curve_cmd->get_option("--m-list")->count() == 0 &&
          !(cfg.loaded && cfg.values.contains("m_list"))) {
        m_list = "200,300,400,500,600,700,800,900,1000,1100,1200";
      }
      const int workers = spr::bench::resolve_workers(curve_common.workers);
      spr::bench::GridSummary summary = spr::bench::recovery_curve(
          curve_n, curve_s, parse_index_list(m_list),
          parse_double_list(curve_beta_list), curve_trials, curve_common.seed,
          workers, stderr_progress("recovery-curve"));
      emit_summary(summary, common_config(curve_common, workers),
                   curve_common.out_dir, "recovery_curve");
      return 0;
    }
    if (phase_cmd->parsed()) {
      spr::bench::PhasePreset preset = phase_common.paper_scale
                                           ? spr::bench::paper_phase_preset()
                                           : spr::bench::desk_phase_preset();
      if (phase_n > 0) preset.n = phase_n;
      if (!phase_s_list.empty()) preset.s_list = parse_index_list(phase_s_list);
      if (!phase_m_list.empty()) preset.m_list = parse_index_list(phase_m_list);
      if (phase_beta > 0) preset.beta = phase_beta;
      if (phase_trials > 0) preset.trials = phase_trials;
      const int workers = spr::bench::resolve_workers(phase_common.workers);
      spr::bench::GridSummary summary = spr::bench::phase_transition_grid(
          preset.n, preset.s_list, preset.m_list, preset.beta, preset.trials,
          phase_common.seed, workers, stderr_progress("phase-transition"));
      emit_summary(summary, common_config(phase_common, workers),
                   phase_common.out_dir, "phase_transition");
      return 0;
    }
    if (noise_cmd->parsed()) {
      if (noise_common.paper_scale) {
        // Full-size run: bigger instance, zero-noise baseline included.
        if (noise_cmd->get_option("--n")->count() == 0) noise_n = 3000;
        if (noise_cmd->get_option("--m")->count() == 0) noise_m = 2000;
        if (noise_cmd->get_option("--s")->count() == 0) noise_s = 20;
        if (noise_cmd->get_option("--sigma-list")->count() == 0 &&
            !(cfg.loaded && cfg.values.contains("sigma_list"))) {
          noise_sigma_list = "0,0.01,0.05,0.1";
        }
      }
      const int workers = spr::bench::resolve_workers(noise_common.workers);
      spr::bench::GridSummary summary = spr::bench::noise_sweep(
          noise_n, noise_m, noise_s, noise_beta,
          parse_double_list(noise_sigma_list), noise_trials, noise_common.seed,
          workers, stderr_progress("noise-sweep"));
      emit_summary(summary, common_config(noise_common, workers),
                   noise_common.out_dir, "noise_sweep");
      return 0;
    }
    if (timing_cmd->parsed()) {
      if (timing_common.paper_scale) {
        if (timing_cmd->get_option("--n")->count() == 0) timing_n = 3000;
        if (timing_cmd->get_option("--m")->count() == 0) timing_m = 2000;
        if (timing_cmd->get_option("--s")->count() == 0) timing_s = 20;
        if (timing_trials_opt->count() == 0 &&
            !(cfg.loaded && cfg.values.contains("trials"))) {
          timing_trials = 50;
        }
      }
      const int workers = spr::bench::resolve_workers(timing_common.workers);
      spr::bench::GridSummary summary = spr::bench::timing_table(
          timing_n, timing_m, timing_s, timing_beta, timing_sigma,
          timing_trials, timing_common.seed, workers,
          stderr_progress("timing"));
      emit_summary(summary, common_config(timing_common, workers),
                   timing_common.out_dir, "timing");
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return 2;
  }
  return 0;
}
