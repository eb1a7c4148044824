#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "predmon/sim.hpp"

using namespace predmon;

namespace {

SystemModel autonomous(int dim, auto&& f) {
  SystemModel model;
  model.dim_x = dim;
  model.dim_u = 1;
  model.dynamics = [f](std::span<const double> x, std::span<const double>,
                       std::span<double> dxdt) { f(x, dxdt); };
  model.controller = [](double, std::span<const double>, std::span<double> u) {
    u[0] = 0.0;
  };
  return model;
}

}  // namespace

TEST_CASE("rk4: zero dynamics keeps the state") {
  SystemModel model = autonomous(2, [](std::span<const double>, std::span<double> d) {
    d[0] = 0.0;
    d[1] = 0.0;
  });
  const std::vector<double> x{1.5, -2.0};
  CHECK(rk4_step(model, 0.0, x, 0.1) == x);
}

TEST_CASE("rk4: exponential growth single step") {
  SystemModel model = autonomous(1, [](std::span<const double> x, std::span<double> d) {
    d[0] = x[0];
  });
  // RK4 reproduces the degree-4 truncation of e^h: 1 + h + h^2/2 + h^3/6 + h^4/24
  const double truncated = 1.0 + 0.1 + 0.01 / 2.0 + 0.001 / 6.0 + 0.0001 / 24.0;
  CHECK(rk4_step(model, 0.0, std::vector<double>{1.0}, 0.1)[0] ==
        Catch::Approx(truncated).margin(1e-12));
}

TEST_CASE("rk4: harmonic oscillator endpoint accuracy") {
  SystemModel model = autonomous(2, [](std::span<const double> x, std::span<double> d) {
    d[0] = x[1];
    d[1] = -x[0];
  });
  std::vector<double> x{1.0, 0.0};
  for (int i = 0; i < 100; ++i) x = rk4_step(model, i * 0.01, x, 0.01);
  CHECK(x[0] == Catch::Approx(std::cos(1.0)).margin(1e-8));
  CHECK(x[1] == Catch::Approx(-std::sin(1.0)).margin(1e-8));
}

TEST_CASE("rk4 shows at least 4th-order convergence on the oscillator") {
  SystemModel model = autonomous(2, [](std::span<const double> x, std::span<double> d) {
    d[0] = x[1];
    d[1] = -x[0];
  });
  auto endpoint_error = [&](int steps) {
    std::vector<double> x{1.0, 0.0};
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) x = rk4_step(model, i * dt, x, dt);
    return std::hypot(x[0] - std::cos(1.0), x[1] + std::sin(1.0));
  };
  CHECK(endpoint_error(50) / endpoint_error(100) >= 12.0);
}

TEST_CASE("simulate: constant and linear systems") {
  SystemModel zero = autonomous(1, [](std::span<const double>, std::span<double> d) {
    d[0] = 0.0;
  });
  zero.initial_state = {2.5};
  const TrajectoryLog constant = simulate(zero, 0.1, 5);
  REQUIRE(constant.times.size() == 6);
  for (const auto& state : constant.states) CHECK(state[0] == 2.5);

  SystemModel ramp = autonomous(1, [](std::span<const double>, std::span<double> d) {
    d[0] = 1.0;
  });
  ramp.initial_state = {0.0};
  const TrajectoryLog line = simulate(ramp, 0.1, 10);
  for (int i = 0; i <= 10; ++i) {
    CHECK(line.states[i][0] == Catch::Approx(0.1 * i).margin(1e-14));
    CHECK(line.times[i] == i * 0.1);
  }
}

TEST_CASE("simulate: oscillator matches the closed form") {
  SystemModel model = autonomous(2, [](std::span<const double> x, std::span<double> d) {
    d[0] = x[1];
    d[1] = -x[0];
  });
  model.initial_state = {1.0, 0.0};
  const TrajectoryLog log = simulate(model, 0.033, 300, 10);
  for (std::size_t i = 0; i < log.times.size(); i += 25) {
    const double t = log.times[i];
    CHECK(log.states[i][0] == Catch::Approx(std::cos(t)).margin(1e-7));
    CHECK(log.states[i][1] == Catch::Approx(-std::sin(t)).margin(1e-7));
  }
}

TEST_CASE("simulate: divergence guard") {
  SystemModel blowup = autonomous(1, [](std::span<const double> x, std::span<double> d) {
    d[0] = x[0] * x[0];
  });
  blowup.initial_state = {10.0};
  CHECK_THROWS_AS(simulate(blowup, 0.1, 500), simulation_error);
}

TEST_CASE("simulated timestamps are exactly uniform") {
  SystemModel zero = autonomous(1, [](std::span<const double>, std::span<double> d) {
    d[0] = 0.0;
  });
  zero.initial_state = {0.0};
  const TrajectoryLog log = simulate(zero, 0.033, 400);
  for (std::size_t i = 0; i < log.times.size(); ++i) {
    CHECK(log.times[i] == i * 0.033);  // constructed, not accumulated
  }
}

TEST_CASE("analytic logs") {
  const TrajectoryLog affine = analytic_log(AnalyticKind::affine, {3.0, 2.0}, 0.5, 4);
  const std::vector<double> expected{3.0, 4.0, 5.0, 6.0, 7.0};
  REQUIRE(affine.states.size() == 5);
  for (int i = 0; i <= 4; ++i) CHECK(affine.states[i][0] == expected[i]);

  const TrajectoryLog quad = analytic_log(AnalyticKind::quadratic, {}, 0.1, 10);
  for (int i = 0; i <= 10; ++i) {
    CHECK(quad.states[i][0] == (0.1 * i) * (0.1 * i));
  }

  const TrajectoryLog sine = analytic_log(AnalyticKind::sine, {}, 0.01, 10);
  CHECK(sine.states[5][0] == std::sin(0.05));

  const TrajectoryLog osc = analytic_log(AnalyticKind::oscillator, {}, 0.1, 3);
  CHECK(osc.states[2].size() == 2);
  CHECK(osc.states[2][0] == std::cos(0.2));
}

TEST_CASE("builtin car_track") {
  const BuiltinSystem sys = builtin_system("car_track");
  CHECK(sys.default_tau == 0.01);
  CHECK(sys.spec.level(sys.model.initial_state) == Catch::Approx(0.5));

  // the controller keeps the car near the centerline
  const TrajectoryLog log = simulate(sys.model, sys.default_tau, 2000, 5);
  double min_level = 1.0;
  for (const auto& state : log.states) {
    min_level = std::min(min_level, sys.spec.level(state));
  }
  CHECK(min_level > 0.3);
}

TEST_CASE("builtin altitude_hold") {
  const BuiltinSystem sys = builtin_system("altitude_hold", 7);
  CHECK(sys.default_tau == 0.033);
  CHECK(sys.spec.level(std::vector<double>{23000.0, 0.0}) == 22000.0);
  CHECK(sys.spec.level(std::vector<double>{1000.0, 0.0}) == 0.0);
  CHECK(sys.spec.level(std::vector<double>{45500.0, 0.0}) == -500.0);

  // deterministic for a fixed seed
  const TrajectoryLog a = simulate(sys.model, sys.default_tau, 500, 4);
  const TrajectoryLog b =
      simulate(builtin_system("altitude_hold", 7).model, sys.default_tau, 500, 4);
  CHECK(a.states == b.states);

  // different seeds give a different setpoint schedule
  const TrajectoryLog c =
      simulate(builtin_system("altitude_hold", 8).model, sys.default_tau, 500, 4);
  CHECK(a.states != c.states);
}

TEST_CASE("unknown system name") {
  CHECK_THROWS_AS(builtin_system("warp_drive"), config_error);
}
