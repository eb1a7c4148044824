#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "predmon/errors.hpp"
#include "predmon/monitor.hpp"

namespace predmon {

/// Closed-loop system: dx/dt = f(x, u), u = pi(t, x).
struct SystemModel {
  int dim_x = 0;
  int dim_u = 0;
  std::function<void(std::span<const double> x, std::span<const double> u,
                     std::span<double> dxdt)>
      dynamics;
  std::function<void(double t, std::span<const double> x, std::span<double> u)>
      controller;
  std::vector<double> initial_state;
};

enum class Provenance { analytic, integrated };

/// Uniformly sampled trajectory, one sample per multiple of tau.
struct TrajectoryLog {
  double tau = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  Provenance provenance = Provenance::integrated;
  int substeps = 1;
};

namespace detail {

inline void eval_closed_loop(const SystemModel& model, double t,
                             std::span<const double> x, std::span<double> u,
                             std::span<double> dxdt) {
  model.controller(t, x, u);
  model.dynamics(x, u, dxdt);
  for (double v : dxdt) {
    if (!std::isfinite(v)) throw simulation_error("rk4: non-finite derivative");
  }
}

}  // namespace detail

/// Classical 4th-order Runge-Kutta step of the closed loop, with the
/// controller re-evaluated at every internal stage.
inline std::vector<double> rk4_step(const SystemModel& model, double t,
                                    std::span<const double> x, double dt) {
  if (!(dt > 0.0)) throw config_error("rk4_step: dt must be positive");
  const std::size_t n = x.size();
  std::vector<double> u(model.dim_u), k1(n), k2(n), k3(n), k4(n), tmp(n);

  detail::eval_closed_loop(model, t, x, u, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
  detail::eval_closed_loop(model, t + 0.5 * dt, tmp, u, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
  detail::eval_closed_loop(model, t + 0.5 * dt, tmp, u, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
  detail::eval_closed_loop(model, t + dt, tmp, u, k4);

  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return next;
}

/// Integrates the closed loop and samples it every tau seconds (steps+1
/// samples including the initial state). The integrator step is
/// tau/substeps. Timestamps are computed as i*tau from integers, so the
/// grid is exactly uniform.
inline TrajectoryLog simulate(const SystemModel& model, double tau, int steps,
                              int substeps = 1) {
  if (!(tau > 0.0)) throw config_error("simulate: tau must be positive");
  if (steps < 1) throw config_error("simulate: steps must be positive");
  if (substeps < 1) throw config_error("simulate: substeps must be positive");

  TrajectoryLog log;
  log.tau = tau;
  log.provenance = Provenance::integrated;
  log.substeps = substeps;
  log.times.reserve(steps + 1);
  log.states.reserve(steps + 1);

  std::vector<double> x = model.initial_state;
  log.times.push_back(0.0);
  log.states.push_back(x);
  const double dt = tau / substeps;
  for (int i = 1; i <= steps; ++i) {
    for (int s = 0; s < substeps; ++s) {
      x = rk4_step(model, (i - 1) * tau + s * dt, x, dt);
    }
    for (double v : x) {
      if (!std::isfinite(v) || std::abs(v) > 1e12) {
        throw simulation_error("simulate: divergence at step " + std::to_string(i));
      }
    }
    log.times.push_back(i * tau);
    log.states.push_back(x);
  }
  return log;
}

enum class AnalyticKind { constant, affine, quadratic, sine, oscillator };

/// Parameters for the analytic trajectories: constant = a; affine = a + b*s.
struct AnalyticParams {
  double a = 0.0;
  double b = 0.0;
};

/// Exact samples of a closed-form trajectory (no integration error):
/// constant a, affine a + b*s, quadratic s^2, sine sin(s), or the harmonic
/// oscillator (cos s, -sin s).
inline TrajectoryLog analytic_log(AnalyticKind kind, const AnalyticParams& params,
                                  double tau, int steps) {
  if (!(tau > 0.0)) throw config_error("analytic_log: tau must be positive");
  if (steps < 0) throw config_error("analytic_log: steps must be non-negative");
  if (!std::isfinite(params.a) || !std::isfinite(params.b)) {
    throw config_error("analytic_log: non-finite parameters");
  }

  TrajectoryLog log;
  log.tau = tau;
  log.provenance = Provenance::analytic;
  for (int i = 0; i <= steps; ++i) {
    const double s = i * tau;
    std::vector<double> state;
    switch (kind) {
      case AnalyticKind::constant: state = {params.a}; break;
      case AnalyticKind::affine: state = {params.a + params.b * s}; break;
      case AnalyticKind::quadratic: state = {s * s}; break;
      case AnalyticKind::sine: state = {std::sin(s)}; break;
      case AnalyticKind::oscillator: state = {std::cos(s), -std::sin(s)}; break;
      default: throw config_error("analytic_log: unknown kind");
    }
    log.times.push_back(s);
    log.states.push_back(std::move(state));
  }
  return log;
}

/// A built-in closed-loop system with its safety level and default sampling
/// interval.
struct BuiltinSystem {
  SystemModel model;
  SafetySpec spec;
  double default_tau = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double smootherstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (s * (s * 6.0 - 15.0) + 10.0);
}

}  // namespace detail

/// Kinematic unicycle (x, y, heading, speed) following the centerline of a
/// circular track of radius 10 m and width 2 m. The controller steers toward
/// a lookahead point on the centerline and holds 2 m/s. Safety level:
/// clearance to the nearer track boundary minus a 0.5 m threshold.
inline BuiltinSystem make_car_track() {
  constexpr double kRadius = 10.0;
  constexpr double kHalfWidth = 1.0;
  constexpr double kThreshold = 0.5;
  constexpr double kLookaheadAngle = 0.15;  // rad along the centerline
  constexpr double kHeadingGain = 4.0;
  constexpr double kSpeedGain = 2.0;
  constexpr double kSpeedRef = 2.0;

  BuiltinSystem sys;
  sys.default_tau = 0.01;
  sys.model.dim_x = 4;
  sys.model.dim_u = 2;
  sys.model.initial_state = {kRadius, 0.0, std::numbers::pi / 2.0, kSpeedRef};
  sys.model.dynamics = [](std::span<const double> x, std::span<const double> u,
                          std::span<double> dxdt) {
    dxdt[0] = x[3] * std::cos(x[2]);
    dxdt[1] = x[3] * std::sin(x[2]);
    dxdt[2] = u[0];
    dxdt[3] = u[1];
  };
  sys.model.controller = [=](double, std::span<const double> x,
                             std::span<double> u) {
    const double angle = std::atan2(x[1], x[0]);
    const double tx = kRadius * std::cos(angle + kLookaheadAngle);
    const double ty = kRadius * std::sin(angle + kLookaheadAngle);
    const double desired = std::atan2(ty - x[1], tx - x[0]);
    u[0] = kHeadingGain * std::remainder(desired - x[2], 2.0 * std::numbers::pi);
    u[1] = kSpeedGain * (kSpeedRef - x[3]);
  };
  sys.spec.name = "car_track";
  sys.spec.level = [=](std::span<const double> x) {
    const double radial = std::hypot(x[0], x[1]);
    return (kHalfWidth - std::abs(radial - kRadius)) - kThreshold;
  };
  return sys;
}

/// Vertical point mass (altitude, climb rate) under a PD controller tracking
/// a setpoint that moves to a new seeded level every 25 s (with a smooth 6 s
/// ramp, so the closed loop stays several times differentiable). Safety
/// level: distance to the nearer edge of the [1000, 45000] ft corridor.
inline BuiltinSystem make_altitude_hold(std::uint64_t seed) {
  constexpr double kAltMin = 1000.0;
  constexpr double kAltMax = 45000.0;
  constexpr double kSegmentSeconds = 25.0;
  constexpr double kRampSeconds = 6.0;
  constexpr double kKp = 0.04;
  constexpr double kKd = 0.4;

  auto segment_level = [seed](std::int64_t k) {
    if (k < 0) k = 0;
    const double u = detail::unit_double(
        detail::splitmix64(seed ^ static_cast<std::uint64_t>(k)));
    return 2000.0 + u * (44000.0 - 2000.0);
  };
  auto setpoint = [segment_level](double t) {
    const std::int64_t k = static_cast<std::int64_t>(std::floor(t / kSegmentSeconds));
    const double prev = segment_level(k - 1);
    const double next = segment_level(k);
    const double s = (t - k * kSegmentSeconds) / kRampSeconds;
    return prev + (next - prev) * detail::smootherstep(s);
  };

  BuiltinSystem sys;
  sys.default_tau = 0.033;
  sys.model.dim_x = 2;
  sys.model.dim_u = 1;
  sys.model.initial_state = {23000.0, 0.0};
  sys.model.dynamics = [](std::span<const double> x, std::span<const double> u,
                          std::span<double> dxdt) {
    dxdt[0] = x[1];
    dxdt[1] = u[0];
  };
  sys.model.controller = [=](double t, std::span<const double> x,
                             std::span<double> u) {
    u[0] = kKp * (setpoint(t) - x[0]) - kKd * x[1];
  };
  sys.spec.name = "altitude_hold";
  sys.spec.level = [=](std::span<const double> x) {
    return std::min(x[0] - kAltMin, kAltMax - x[0]);
  };
  return sys;
}

/// Built-in system by name ("car_track" or "altitude_hold").
inline BuiltinSystem builtin_system(const std::string& name, std::uint64_t seed = 0) {
  if (name == "car_track") return make_car_track();
  if (name == "altitude_hold") return make_altitude_hold(seed);
  throw config_error("unknown system: " + name);
}

}  // namespace predmon
