#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "predmon/numdiff.hpp"

using namespace predmon;

namespace {

// Independent oracle: direct evaluation of the closed form
// sum_{j=0}^{i} (-1)^j C(i,j) x_{-j} / tau^i.
double closed_form_bd(const std::vector<double>& values, double tau, int i) {
  double sum = 0.0;
  const std::size_t last = values.size() - 1;
  for (int j = 0; j <= i; ++j) {
    const double term = static_cast<double>(binomial(i, j)) * values[last - j];
    sum += (j % 2 == 0) ? term : -term;
  }
  return sum / std::pow(tau, i);
}

}  // namespace

TEST_CASE("binomial basics") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(14, 7) == 3432);
  CHECK(binomial(32, 16) == 601080390ull);
  CHECK_THROWS_AS(binomial(3, 4), config_error);
  CHECK_THROWS_AS(binomial(33, 1), config_error);
  CHECK_THROWS_AS(binomial(-1, 0), config_error);
}

TEST_CASE("backward difference on small hand windows") {
  const std::vector<double> values{1.0, 2.0, 4.0};
  CHECK(backward_difference({values, 1.0}, 1) == Catch::Approx(2.0));
  CHECK(backward_difference({values, 1.0}, 2) == Catch::Approx(1.0));

  // xi(s) = s^2 sampled at t - tau and t with t = 1, tau = 0.1
  const std::vector<double> quad{0.81, 1.0};
  CHECK(backward_difference({quad, 0.1}, 1) == Catch::Approx(1.9).epsilon(1e-12));
}

TEST_CASE("constant windows differentiate to zero") {
  const std::vector<double> values(8, 3.25);
  for (int i = 1; i <= 7; ++i) {
    CHECK(backward_difference({values, 0.37}, i) == 0.0);
  }
}

TEST_CASE("backward difference input validation") {
  const std::vector<double> values{1.0, 2.0};
  CHECK_THROWS_AS(backward_difference({values, 1.0}, 2), stencil_error);
  CHECK_THROWS_AS(backward_difference({values, 0.0}, 1), config_error);
  CHECK_THROWS_AS(backward_difference({values, -1.0}, 1), config_error);
  const std::vector<double> bad{1.0, std::nan("")};
  CHECK_THROWS_AS(backward_difference({bad, 1.0}, 1), data_error);
  CHECK_THROWS_AS(backward_difference({values, 1.0}, 0), config_error);
  CHECK_THROWS_AS(backward_difference({values, 1.0}, 33), config_error);
}

TEST_CASE("iterated differencing matches the closed form on random windows") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> value(-10.0, 10.0);
  std::uniform_real_distribution<double> tau_dist(0.01, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int order = 1 + trial % 14;
    const double tau = tau_dist(rng);
    std::vector<double> values(order + 1 + trial % 3);
    for (double& v : values) v = value(rng);
    const double iterated = backward_difference({values, tau}, order);
    const double closed = closed_form_bd(values, tau, order);
    const double scale = std::max({1.0, std::abs(iterated), std::abs(closed)});
    CHECK(std::abs(iterated - closed) <= 1e-12 * scale);
  }
}

TEST_CASE("polynomial exactness") {
  // For xi a polynomial of degree <= i the i-th difference is exact.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int order = 1; order <= 6; ++order) {
    std::vector<double> coeffs(order + 1);
    for (double& c : coeffs) c = coeff(rng);
    const double tau = 0.25;  // large enough step to keep cancellation benign
    const double t = 1.3;
    std::vector<double> values;
    for (int k = order; k >= 0; --k) {
      const double s = t - k * tau;
      double v = 0.0;
      for (int p = 0; p <= order; ++p) v += coeffs[p] * std::pow(s, p);
      values.push_back(v);
    }
    // the order-th derivative of sum_p coeffs[p] s^p is coeffs[order] * order!
    const double deriv = coeffs[order] * factorial(order);
    CHECK(backward_difference({values, tau}, order) ==
          Catch::Approx(deriv).margin(1e-9));
  }
}

TEST_CASE("linearity of the difference operator") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int order = 1 + trial % 5;
    const double tau = 0.2;
    std::vector<double> a(order + 1), b(order + 1), combo(order + 1);
    const double alpha = value(rng), beta = value(rng);
    for (int k = 0; k <= order; ++k) {
      a[k] = value(rng);
      b[k] = value(rng);
      combo[k] = alpha * a[k] + beta * b[k];
    }
    const double lhs = backward_difference({combo, tau}, order);
    const double rhs = alpha * backward_difference({a, tau}, order) +
                       beta * backward_difference({b, tau}, order);
    CHECK(lhs == Catch::Approx(rhs).margin(1e-9));
  }
}

TEST_CASE("coefficient magnitude hand values") {
  CHECK(bd_coefficient_magnitude(1) == 1.0);
  CHECK(bd_coefficient_magnitude(2) == 6.0);
  CHECK(bd_coefficient_magnitude(3) == 36.0);
  // identity check: the alternating sum equals i! * i * (i+1) / 2
  for (int i = 1; i <= 20; ++i) {
    CHECK(bd_coefficient_magnitude(i) ==
          Catch::Approx(factorial(i) * i * (i + 1) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("error bound hand values") {
  CHECK(bd_error_bound(1, 0.1, 2.0) == Catch::Approx(0.1).epsilon(1e-12));
  CHECK(bd_error_bound(2, 0.01, 0.0) == 0.0);
  CHECK(bd_error_bound(2, 0.01, 1.0) == Catch::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("bound validity and first-order convergence on sin") {
  const double t = 1.0;
  for (int i = 1; i <= 3; ++i) {
    double previous_error = 0.0;
    for (double tau : {1e-2, 1e-3}) {
      auto sample = [&](double tt) {
        std::vector<double> values;
        for (int k = i; k >= 0; --k) values.push_back(std::sin(tt - k * tau));
        return values;
      };
      // i-th derivative of sin at t
      const double truth = std::sin(t + i * std::numbers::pi / 2.0);
      const std::vector<double> values = sample(t);
      const double error = std::abs(truth - backward_difference({values, tau}, i));
      CHECK(error <= 1.5 * bd_error_bound(i, tau, 1.0));

      // halving tau should roughly halve the error
      const std::vector<double> values_half = [&] {
        std::vector<double> v;
        for (int k = i; k >= 0; --k) v.push_back(std::sin(t - k * tau / 2.0));
        return v;
      }();
      const double truth_half = truth;
      const double error_half =
          std::abs(truth_half - backward_difference({values_half, tau / 2.0}, i));
      const double ratio = error / error_half;
      CHECK(ratio > 2.0 * 0.8);
      CHECK(ratio < 2.0 * 1.2);
      previous_error = error;
    }
    (void)previous_error;
  }
}
