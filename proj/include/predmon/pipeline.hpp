#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "predmon/csv.hpp"
#include "predmon/metrics.hpp"
#include "predmon/monitor.hpp"
#include "predmon/sim.hpp"
#include "predmon/taylor.hpp"
#include "predmon/ttc.hpp"

namespace predmon {

struct ReplayResult {
  std::vector<VerdictRow> rows;
  double latency_p50_seconds = 0.0;
  double latency_p99_seconds = 0.0;
};

/// Replays a trajectory log through a monitor and collects one verdict row
/// per emitted verdict, plus per-observation latency percentiles.
inline ReplayResult replay(const TrajectoryLog& log, const MonitorConfig& config) {
  Monitor monitor(config);
  ReplayResult result;
  std::vector<double> latencies;
  latencies.reserve(log.times.size());
  for (std::size_t i = 0; i < log.times.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const MonitorVerdict* verdict = monitor.observe(log.states[i], log.times[i]);
    const auto stop = std::chrono::steady_clock::now();
    latencies.push_back(std::chrono::duration<double>(stop - start).count());
    if (verdict != nullptr) {
      result.rows.push_back({verdict->at_time, verdict->min_level,
                             verdict->first_violation, verdict->warning});
    }
  }
  std::sort(latencies.begin(), latencies.end());
  if (!latencies.empty()) {
    result.latency_p50_seconds = latencies[latencies.size() / 2];
    result.latency_p99_seconds = latencies[(latencies.size() * 99) / 100];
  }
  return result;
}

/// One prediction set per log sample, anchored at that sample; sets are
/// empty until the window holds degree+1 samples.
inline std::vector<PredictionSet> predict_along_log(const TrajectoryLog& log,
                                                    int degree, int horizon) {
  std::vector<PredictionSet> sets(log.times.size());
  Stencil stencil;
  stencil.tau = log.tau;
  for (std::size_t i = 0; i < log.times.size(); ++i) {
    stencil.samples.push_back({log.times[i], log.states[i]});
    if (stencil.samples.size() > static_cast<std::size_t>(degree + 1)) {
      stencil.samples.erase(stencil.samples.begin());
    }
    if (stencil.samples.size() == static_cast<std::size_t>(degree + 1)) {
      sets[i] = predict_horizon(stencil, degree, horizon);
    }
  }
  return sets;
}

/// True safety levels of every log sample under the given spec.
inline std::vector<double> truth_levels(const TrajectoryLog& log,
                                        const SafetySpec& spec) {
  std::vector<double> levels;
  levels.reserve(log.states.size());
  for (const auto& state : log.states) levels.push_back(spec.level(state));
  return levels;
}

/// Maps verdict rows back onto the log's sampling grid as a warning flag per
/// sample (false where no verdict exists, e.g. warm-up).
inline std::vector<char> warnings_on_grid(const TrajectoryLog& log,
                                          const std::vector<VerdictRow>& rows) {
  std::vector<char> warnings(log.times.size(), 0);
  const double t0 = log.times.front();
  for (const VerdictRow& row : rows) {
    const double offset = (row.t - t0) / log.tau;
    const auto index = static_cast<std::ptrdiff_t>(std::llround(offset));
    if (index < 0 || index >= static_cast<std::ptrdiff_t>(warnings.size()) ||
        std::abs(offset - static_cast<double>(index)) > 1e-6) {
      throw data_error("verdict time off the trajectory grid: t=" +
                       format_double(row.t));
    }
    warnings[index] = row.warning ? 1 : 0;
  }
  return warnings;
}

/// Per-step predicted level sequences on the log grid (empty where no
/// verdict exists), for the minimum-safety-distance metric. Uses min_level
/// as a one-element sequence, which preserves the minimum over the horizon.
inline std::vector<std::vector<double>> predicted_min_levels_on_grid(
    const TrajectoryLog& log, const std::vector<VerdictRow>& rows) {
  std::vector<std::vector<double>> levels(log.times.size());
  const double t0 = log.times.front();
  for (const VerdictRow& row : rows) {
    const auto index =
        static_cast<std::size_t>(std::llround((row.t - t0) / log.tau));
    if (index < levels.size()) levels[index] = {row.min_level};
  }
  return levels;
}

/// First sample whose true level is negative, if any.
inline std::optional<std::size_t> first_unsafe_index(
    std::span<const double> levels) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 0.0) return i;
  }
  return std::nullopt;
}

}  // namespace predmon
