// Command-line front end: simulate built-in systems, replay trajectory CSVs
// through the predictive monitor and the TTC baseline, and evaluate accuracy
// metrics. All artifacts are CSV files; runs are deterministic for a fixed
// seed.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "predmon/predmon.hpp"

namespace {

struct Options {
  std::string system;
  std::string input;
  std::string out_dir = ".";
  double tau = 0.0;  // 0 = use the system default
  std::vector<int> degrees{2};
  std::vector<int> horizons{50};
  int steps = 3000;
  int substeps = 10;
  std::uint64_t seed = 0;
  bool baseline = false;
};

std::string verdict_path(const Options& opt, int degree, int horizon) {
  return opt.out_dir + "/verdicts_d" + std::to_string(degree) + "_h" +
         std::to_string(horizon) + ".csv";
}

std::string ttc_verdict_path(const Options& opt, int horizon) {
  return opt.out_dir + "/ttc_verdicts_h" + std::to_string(horizon) + ".csv";
}

void ensure_out_dir(const Options& opt) {
  std::filesystem::create_directories(opt.out_dir);
}

int cmd_simulate(const Options& opt) {
  const predmon::BuiltinSystem sys = predmon::builtin_system(opt.system, opt.seed);
  const double tau = opt.tau > 0.0 ? opt.tau : sys.default_tau;
  const predmon::TrajectoryLog log =
      predmon::simulate(sys.model, tau, opt.steps, opt.substeps);

  ensure_out_dir(opt);
  const std::string path = opt.out_dir + "/trajectory.csv";
  predmon::write_trajectory(path, log);

  double min_level = std::numeric_limits<double>::infinity();
  for (const auto& state : log.states) {
    min_level = std::min(min_level, sys.spec.level(state));
  }
  std::cout << "wrote " << path << " (" << log.times.size() << " samples, tau=" << tau
            << ")\n";
  std::cout << "final state:";
  for (double v : log.states.back()) std::cout << " " << predmon::format_double(v);
  std::cout << "\nmin safety level: " << predmon::format_double(min_level) << "\n";
  return 0;
}

int cmd_monitor(const Options& opt) {
  const predmon::BuiltinSystem sys = predmon::builtin_system(opt.system, opt.seed);
  const predmon::TrajectoryLog log = predmon::read_trajectory(opt.input);
  ensure_out_dir(opt);

  for (int horizon : opt.horizons) {
    for (int degree : opt.degrees) {
      const predmon::ReplayResult result =
          predmon::replay(log, {log.tau, degree, horizon, sys.spec});
      const std::string path = verdict_path(opt, degree, horizon);
      predmon::write_verdicts(path, result.rows);
      std::cout << "wrote " << path << " (" << result.rows.size()
                << " verdicts, latency p50=" << result.latency_p50_seconds * 1e3
                << " ms, p99=" << result.latency_p99_seconds * 1e3 << " ms)\n";
    }
    if (opt.baseline) {
      const predmon::ReplayResult result =
          predmon::replay(log, {log.tau, 1, horizon, sys.spec});
      const std::string path = ttc_verdict_path(opt, horizon);
      predmon::write_verdicts(path, result.rows);
      std::cout << "wrote " << path << " (" << result.rows.size()
                << " verdicts, latency p50=" << result.latency_p50_seconds * 1e3
                << " ms, p99=" << result.latency_p99_seconds * 1e3 << " ms)\n";
    }
  }
  return 0;
}

int cmd_evaluate(const Options& opt) {
  const predmon::BuiltinSystem sys = predmon::builtin_system(opt.system, opt.seed);
  const predmon::TrajectoryLog log = predmon::read_trajectory(opt.input);
  const std::vector<double> truth = predmon::truth_levels(log, sys.spec);
  const auto unsafe_index = predmon::first_unsafe_index(truth);

  std::vector<predmon::ConfusionRow> confusion;
  std::vector<predmon::QMetricsRow> q_rows;

  auto evaluate_file = [&](const std::string& method, int degree, int horizon,
                           const std::string& path) {
    const std::vector<predmon::VerdictRow> rows = predmon::read_verdicts(path);
    const std::vector<char> warnings = predmon::warnings_on_grid(log, rows);
    confusion.push_back(
        {method, degree, horizon,
         predmon::label_confusion(truth, warnings, horizon)});

    predmon::QMetricsRow q{method, degree, horizon, std::nullopt, 0.0};
    if (unsafe_index) {
      std::vector<double> warn_times;
      for (const predmon::VerdictRow& row : rows) {
        if (row.warning) warn_times.push_back(row.t);
      }
      q.lead_steps = predmon::earliest_warning_lead(
          warn_times, log.times[*unsafe_index], horizon, log.tau);
    }
    q.min_distance_error = predmon::min_safety_distance_error(
        predmon::predicted_min_levels_on_grid(log, rows), truth, horizon);
    q_rows.push_back(q);
  };

  for (int horizon : opt.horizons) {
    for (int degree : opt.degrees) {
      evaluate_file("taylor", degree, horizon, verdict_path(opt, degree, horizon));
    }
    if (opt.baseline) {
      evaluate_file("ttc", 1, horizon, ttc_verdict_path(opt, horizon));
    }
  }

  ensure_out_dir(opt);
  predmon::write_confusion(opt.out_dir + "/confusion.csv", confusion);
  predmon::write_q_metrics(opt.out_dir + "/q_metrics.csv", q_rows);
  std::cout << "wrote " << opt.out_dir << "/confusion.csv and " << opt.out_dir
            << "/q_metrics.csv (" << confusion.size() << " method rows)\n";
  return 0;
}

int cmd_ablate(const Options& opt) {
  const predmon::TrajectoryLog log = predmon::read_trajectory(opt.input);
  const int horizon = opt.horizons.front();
  ensure_out_dir(opt);
  const std::string path = opt.out_dir + "/ablation.csv";

  bool append = false;
  for (int degree : opt.degrees) {
    const auto sets = predmon::predict_along_log(log, degree, horizon);
    const auto records = predmon::rmse_by_lookahead(sets, log);
    predmon::write_ablation(path, "taylor", degree, log.tau, records, append);
    append = true;
  }
  std::cout << "wrote " << path << " (" << opt.degrees.size() << " degrees x "
            << horizon << " lookaheads)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predictive runtime monitoring for black-box dynamical systems"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    cmd->add_option("--out-dir", opt.out_dir, "Output directory");
    cmd->add_option("--seed", opt.seed, "Seed for the built-in setpoint schedule");
    if (needs_input) {
      cmd->add_option("--input", opt.input, "Trajectory CSV path")->required();
    }
  };

  CLI::App* sim = app.add_subcommand("simulate", "Integrate a built-in system to CSV");
  sim->add_option("--system", opt.system, "car_track | altitude_hold")->required();
  sim->add_option("--tau", opt.tau, "Sampling interval (default: system-specific)");
  sim->add_option("--steps", opt.steps, "Number of sampling steps");
  sim->add_option("--substeps", opt.substeps, "Integrator substeps per sample");
  add_common(sim, false);

  CLI::App* mon = app.add_subcommand("monitor", "Replay a trajectory CSV through the monitor");
  mon->add_option("--system", opt.system, "System whose safety spec to use")->required();
  mon->add_option("--degree", opt.degrees, "Polynomial degree(s)");
  mon->add_option("--horizon", opt.horizons, "Prediction horizon(s)");
  mon->add_flag("--baseline", opt.baseline, "Also run the TTC baseline");
  add_common(mon, true);

  CLI::App* eval = app.add_subcommand("evaluate", "Score verdict CSVs against ground truth");
  eval->add_option("--system", opt.system, "System whose safety spec to use")->required();
  eval->add_option("--degree", opt.degrees, "Polynomial degree(s)");
  eval->add_option("--horizon", opt.horizons, "Prediction horizon(s)");
  eval->add_flag("--baseline", opt.baseline, "Also score the TTC baseline");
  add_common(eval, true);

  CLI::App* abl = app.add_subcommand("ablate", "Prediction RMSE per degree and lookahead");
  abl->add_option("--degree", opt.degrees, "Polynomial degree(s)");
  abl->add_option("--horizon", opt.horizons, "Maximum lookahead in steps");
  add_common(abl, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(opt);
    if (mon->parsed()) return cmd_monitor(opt);
    if (eval->parsed()) return cmd_evaluate(opt);
    if (abl->parsed()) return cmd_ablate(opt);
  } catch (const predmon::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
