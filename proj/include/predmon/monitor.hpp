#pragma once

#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "predmon/errors.hpp"
#include "predmon/numdiff.hpp"
#include "predmon/taylor.hpp"

namespace predmon {

/// Real-valued safety level over states; the system is safe while the level
/// is non-negative. Boolean specs encode as 0 (safe) / -1 (unsafe).
struct SafetySpec {
  std::string name;
  std::function<double(std::span<const double>)> level;
};

struct MonitorConfig {
  double tau = 0.0;
  int degree = 0;
  int horizon = 0;
  SafetySpec spec;
};

/// Per-observation monitor output: predicted safety levels for the next
/// horizon sampling instances plus derived statistics. first_violation is
/// the 1-based index of the first predicted negative level.
struct MonitorVerdict {
  double at_time = 0.0;
  std::vector<double> predicted_levels;
  double min_level = 0.0;
  std::optional<int> first_violation;
  bool warning = false;
};

/// Streaming predictive monitor. Keeps the newest degree+1 samples in a
/// FIFO window; once the window is full, every observation yields a verdict.
/// Single-owner mutable state: one stream per instance.
class Monitor {
 public:
  explicit Monitor(MonitorConfig config) : config_(std::move(config)) {
    if (!(config_.tau > 0.0)) throw config_error("monitor: tau must be positive");
    if (config_.degree < 1 || config_.degree > kMaxOrder) {
      throw config_error("monitor: degree must be in [1, " +
                         std::to_string(kMaxOrder) + "]");
    }
    if (config_.horizon < 1) throw config_error("monitor: horizon must be positive");
    if (!config_.spec.level) throw config_error("monitor: safety spec has no evaluator");
    verdict_.predicted_levels.resize(config_.horizon);
  }

  /// Ingests the sample (x, t). Returns the verdict for this step, or
  /// nullptr during warm-up. A timestamp off the uniform grid (tolerance
  /// 1e-6 * tau) resets the window and restarts warm-up with this sample.
  /// The returned verdict is owned by the monitor and valid until the next
  /// observe call.
  const MonitorVerdict* observe(std::span<const double> x, double t) {
    for (double v : x) {
      if (!std::isfinite(v)) throw data_error("monitor: non-finite state sample");
    }
    if (dim_ == 0) {
      init_buffers(static_cast<int>(x.size()));
    } else if (static_cast<int>(x.size()) != dim_) {
      throw data_error("monitor: state dimension changed mid-stream");
    }

    if (count_ > 0 && std::abs(t - (last_time_ + config_.tau)) > 1e-6 * config_.tau) {
      count_ = 0;  // off-grid sample: drop the window, restart warm-up here
    }
    push(x, t);
    if (count_ < static_cast<std::size_t>(config_.degree + 1)) return nullptr;

    compute_verdict(t);
    return &verdict_;
  }

  void reset() { count_ = 0; }

  double tau() const { return config_.tau; }
  int degree() const { return config_.degree; }
  int horizon() const { return config_.horizon; }
  const SafetySpec& spec() const { return config_.spec; }
  std::size_t window_size() const { return count_; }

 private:
  void init_buffers(int dim) {
    if (dim < 1) throw data_error("monitor: empty state sample");
    dim_ = dim;
    const int rows = config_.degree + 1;
    window_.resize(static_cast<std::size_t>(rows) * dim_);
    derivs_.resize(static_cast<std::size_t>(config_.degree) * dim_);
    column_.resize(rows);
    predicted_.resize(dim_);
  }

  void push(std::span<const double> x, double t) {
    const std::size_t rows = config_.degree + 1;
    if (count_ == rows) {
      // evict the oldest row; the window stays oldest-first and contiguous
      std::memmove(window_.data(), window_.data() + dim_,
                   (rows - 1) * dim_ * sizeof(double));
      --count_;
    }
    double* row = window_.data() + count_ * dim_;
    for (int d = 0; d < dim_; ++d) row[d] = x[d];
    ++count_;
    last_time_ = t;
  }

  void compute_verdict(double t) {
    const int degree = config_.degree;
    for (int d = 0; d < dim_; ++d) {
      for (int k = 0; k <= degree; ++k) column_[k] = window_[k * dim_ + d];
      backward_differences({column_, config_.tau},
                           std::span<double>(derivs_.data() + d * degree, degree));
    }

    verdict_.at_time = t;
    verdict_.min_level = std::numeric_limits<double>::infinity();
    verdict_.first_violation.reset();
    const double* newest = window_.data() + degree * dim_;
    for (int m = 1; m <= config_.horizon; ++m) {
      const double dt = m * config_.tau;
      for (int d = 0; d < dim_; ++d) {
        predicted_[d] = detail::evaluate_dim(
            newest[d], std::span<const double>(derivs_.data() + d * degree, degree), dt);
      }
      const double level = config_.spec.level(predicted_);
      verdict_.predicted_levels[m - 1] = level;
      if (level < verdict_.min_level) verdict_.min_level = level;
      if (level < 0.0 && !verdict_.first_violation) verdict_.first_violation = m;
    }
    verdict_.warning = verdict_.first_violation.has_value();
  }

  MonitorConfig config_;
  int dim_ = 0;
  std::vector<double> window_;     // (degree+1) x dim, oldest row first
  std::vector<double> derivs_;     // dim x degree
  std::vector<double> column_;     // scratch: one dimension of the window
  std::vector<double> predicted_;  // scratch: one predicted state
  std::size_t count_ = 0;
  double last_time_ = 0.0;
  MonitorVerdict verdict_;
};

}  // namespace predmon
