#pragma once

#include <optional>
#include <span>

#include "predmon/monitor.hpp"

namespace predmon {

/// Degree-1 verdict with the first predicted violation read as a
/// time-to-collision in units of tau.
struct TtcVerdict {
  const MonitorVerdict* verdict = nullptr;
  std::optional<int> ttc_steps;
};

/// Time-to-collision baseline: linear extrapolation of the state, i.e. the
/// degree-1 special case of the predictive monitor. The velocity estimate is
/// the first backward difference (x_0 - x_{-1}) / tau, since the system is
/// observed as a black box.
class TtcMonitor {
 public:
  TtcMonitor(double tau, int horizon, SafetySpec spec)
      : monitor_(MonitorConfig{tau, 1, horizon, std::move(spec)}) {}

  /// As Monitor::observe; ttc_steps mirrors first_violation.
  TtcVerdict observe(std::span<const double> x, double t) {
    const MonitorVerdict* verdict = monitor_.observe(x, t);
    if (verdict == nullptr) return {};
    return {verdict, verdict->first_violation};
  }

  Monitor& underlying() { return monitor_; }
  const Monitor& underlying() const { return monitor_; }

 private:
  Monitor monitor_;
};

}  // namespace predmon
