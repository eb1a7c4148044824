#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "predmon/errors.hpp"
#include "predmon/sim.hpp"
#include "predmon/taylor.hpp"

namespace predmon {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
};

/// Prediction-error summary for one lookahead distance.
struct AblationRecord {
  int lookahead_steps = 0;
  double rmse = 0.0;
  double mean_error = 0.0;
  double std_error = 0.0;
};

/// Labels each step's warning against ground truth in the window
/// [i+1, i+h]: TP if a warning precedes a true violation in the window,
/// FP if it does not, FN if a violation in the window went unwarned, TN
/// otherwise. Steps whose window extends past the end of the log are
/// excluded. Warm-up steps must be passed as warnings = false.
inline ConfusionCounts label_confusion(std::span<const double> truth_levels,
                                       std::span<const char> warnings,
                                       int horizon) {
  if (truth_levels.size() != warnings.size()) {
    throw data_error("label_confusion: truth/warning length mismatch");
  }
  if (horizon < 1) throw config_error("label_confusion: horizon must be positive");

  ConfusionCounts counts;
  const std::size_t n = truth_levels.size();
  if (n < static_cast<std::size_t>(horizon) + 1) return counts;
  for (std::size_t i = 0; i + horizon < n; ++i) {
    bool unsafe_ahead = false;
    for (int m = 1; m <= horizon; ++m) {
      if (truth_levels[i + m] < 0.0) {
        unsafe_ahead = true;
        break;
      }
    }
    const bool warned = warnings[i] != 0;
    if (warned && unsafe_ahead) ++counts.tp;
    else if (warned && !unsafe_ahead) ++counts.fp;
    else if (!warned && unsafe_ahead) ++counts.fn;
    else ++counts.tn;
  }
  return counts;
}

/// TP / (TP + FN); empty when no positives exist.
inline std::optional<double> tpr(const ConfusionCounts& c) {
  const std::uint64_t denom = c.tp + c.fn;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(denom);
}

/// TN / (TN + FP); empty when no negatives exist.
inline std::optional<double> tnr(const ConfusionCounts& c) {
  const std::uint64_t denom = c.tn + c.fp;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(c.tn) / static_cast<double>(denom);
}

/// Lead time, in steps, of the earliest warning issued within the h*tau
/// window before the first unsafe sample; 0 if no warning fell in that
/// window. Larger is better; the maximum is h.
inline double earliest_warning_lead(std::span<const double> warn_times,
                                    double unsafe_time, int horizon, double tau) {
  if (horizon < 1) throw config_error("earliest_warning_lead: horizon must be positive");
  if (!(tau > 0.0)) throw config_error("earliest_warning_lead: tau must be positive");

  const double window_start = unsafe_time - horizon * tau - 1e-9 * tau;
  double earliest = unsafe_time;
  bool found = false;
  for (double w : warn_times) {
    if (w >= window_start && w < unsafe_time && (!found || w < earliest)) {
      earliest = w;
      found = true;
    }
  }
  if (!found) return 0.0;
  return (unsafe_time - earliest) / tau;
}

/// Mean absolute error between the predicted and observed minimum safety
/// level over the horizon. Per step i, the predicted minimum combines the
/// current true level (m = 0) with the predicted levels for m = 1..h; the
/// observed minimum is over the true levels in [i, i+h]. Steps without a
/// verdict or with a truncated window are excluded.
inline double min_safety_distance_error(
    std::span<const std::vector<double>> predicted_levels,
    std::span<const double> truth_levels, int horizon) {
  if (predicted_levels.size() != truth_levels.size()) {
    throw data_error("min_safety_distance_error: grid length mismatch");
  }
  if (horizon < 1) throw config_error("min_safety_distance_error: horizon must be positive");

  double sum = 0.0;
  std::size_t evaluated = 0;
  const std::size_t n = truth_levels.size();
  for (std::size_t i = 0; i + horizon < n; ++i) {
    if (predicted_levels[i].empty()) continue;  // warm-up
    double predicted_min = truth_levels[i];
    for (double level : predicted_levels[i]) predicted_min = std::min(predicted_min, level);
    double observed_min = truth_levels[i];
    for (int m = 1; m <= horizon; ++m) {
      observed_min = std::min(observed_min, truth_levels[i + m]);
    }
    sum += std::abs(predicted_min - observed_min);
    ++evaluated;
  }
  return evaluated == 0 ? 0.0 : sum / static_cast<double>(evaluated);
}

/// Per-lookahead RMSE / mean / std of the Euclidean prediction error.
/// prediction_sets[i] must be anchored at truth sample i (so its m-th state
/// predicts truth sample i+m); empty sets mark warm-up steps.
inline std::vector<AblationRecord> rmse_by_lookahead(
    std::span<const PredictionSet> prediction_sets, const TrajectoryLog& truth) {
  if (prediction_sets.size() != truth.states.size()) {
    throw data_error("rmse_by_lookahead: prediction/truth length mismatch");
  }
  int horizon = 0;
  for (const PredictionSet& p : prediction_sets) {
    horizon = std::max(horizon, static_cast<int>(p.states.size()));
  }

  std::vector<AblationRecord> records;
  records.reserve(horizon);
  const std::size_t n = truth.states.size();
  std::vector<double> errors;
  for (int m = 1; m <= horizon; ++m) {
    errors.clear();
    for (std::size_t i = 0; i + m < n; ++i) {
      const PredictionSet& p = prediction_sets[i];
      if (static_cast<int>(p.states.size()) < m) continue;
      const std::vector<double>& predicted = p.states[m - 1];
      const std::vector<double>& actual = truth.states[i + m];
      if (predicted.size() != actual.size()) {
        throw data_error("rmse_by_lookahead: state dimension mismatch");
      }
      double sq = 0.0;
      for (std::size_t d = 0; d < actual.size(); ++d) {
        const double e = predicted[d] - actual[d];
        sq += e * e;
      }
      errors.push_back(std::sqrt(sq));
    }

    AblationRecord record;
    record.lookahead_steps = m;
    if (!errors.empty()) {
      double sum = 0.0, sumsq = 0.0;
      for (double e : errors) {  // fixed left-to-right reduction
        sum += e;
        sumsq += e * e;
      }
      const double inv = 1.0 / static_cast<double>(errors.size());
      record.rmse = std::sqrt(sumsq * inv);
      record.mean_error = sum * inv;
      const double var = std::max(0.0, sumsq * inv - record.mean_error * record.mean_error);
      record.std_error = std::sqrt(var);
    }
    records.push_back(record);
  }
  return records;
}

}  // namespace predmon
