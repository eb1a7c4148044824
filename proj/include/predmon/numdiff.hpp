#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "predmon/errors.hpp"

namespace predmon {

/// Largest supported difference / polynomial order.
inline constexpr int kMaxOrder = 32;

/// C(i, j) in exact integer arithmetic. Requires 0 <= j <= i <= kMaxOrder.
inline std::uint64_t binomial(int i, int j) {
  if (i < 0 || j < 0 || j > i || i > kMaxOrder) {
    throw config_error("binomial: arguments out of range (need 0 <= j <= i <= " +
                       std::to_string(kMaxOrder) + ")");
  }
  // Pascal's triangle row i. Fits in 64 bits for i <= 32.
  std::array<std::uint64_t, kMaxOrder + 1> row{};
  row[0] = 1;
  for (int r = 1; r <= i; ++r) {
    for (int c = r; c > 0; --c) row[c] += row[c - 1];
  }
  return row[j];
}

/// n! computed exactly, returned as the nearest double.
inline double factorial(int n) {
  if (n < 0 || n > kMaxOrder + 1) {
    throw config_error("factorial: argument out of range");
  }
  boost::multiprecision::cpp_int f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f.convert_to<double>();
}

/// One state dimension sampled at uniform spacing tau, oldest first.
/// The last element is the current sample x_0; the element at offset j
/// from the end is x_{-j}.
struct UniformWindow {
  std::span<const double> values;
  double tau = 0.0;
};

namespace detail {

inline void check_window(const UniformWindow& window, int min_length) {
  if (!(window.tau > 0.0)) {
    throw config_error("uniform window: tau must be positive");
  }
  if (static_cast<int>(window.values.size()) < min_length) {
    throw stencil_error("uniform window: need at least " +
                        std::to_string(min_length) + " samples, got " +
                        std::to_string(window.values.size()));
  }
  for (double v : window.values) {
    if (!std::isfinite(v)) throw data_error("uniform window: non-finite sample");
  }
}

}  // namespace detail

/// Fills out[i-1] with the i-th backward-difference derivative estimate at
/// the newest sample, for i = 1..out.size(), via one in-place difference
/// triangle over the newest out.size()+1 samples. O(order^2) and
/// allocation-free.
inline void backward_differences(const UniformWindow& window,
                                 std::span<double> out) {
  const int order = static_cast<int>(out.size());
  if (order < 1 || order > kMaxOrder) {
    throw config_error("backward_differences: order out of range");
  }
  detail::check_window(window, order + 1);

  // Newest order+1 samples, oldest first.
  std::array<double, kMaxOrder + 1> buf;
  const std::size_t offset = window.values.size() - (order + 1);
  for (int j = 0; j <= order; ++j) buf[j] = window.values[offset + j];

  // After pass i the last remaining element is the i-th estimate at x_0.
  for (int i = 1; i <= order; ++i) {
    for (int j = 0; j <= order - i; ++j) {
      buf[j] = (buf[j + 1] - buf[j]) / window.tau;
    }
    out[i - 1] = buf[order - i];
  }
}

/// i-th backward-difference derivative estimate at the newest sample,
/// computed by iterated differencing.
inline double backward_difference(const UniformWindow& window, int i) {
  if (i < 1 || i > kMaxOrder) {
    throw config_error("backward_difference: order out of range");
  }
  std::array<double, kMaxOrder> out;
  backward_differences(window, std::span<double>(out.data(), i));
  return out[i - 1];
}

/// |sum_{j=0}^{i} (-1)^j C(i,j) (-j)^{i+1}|, the order-dependent factor of
/// the leading error term of the i-th backward difference. Exact integer
/// arithmetic, converted to double at the end.
inline double bd_coefficient_magnitude(int i) {
  if (i < 1 || i > kMaxOrder) {
    throw config_error("bd_coefficient_magnitude: order out of range");
  }
  using boost::multiprecision::cpp_int;
  cpp_int sum = 0;
  for (int j = 0; j <= i; ++j) {
    cpp_int term = cpp_int(binomial(i, j));
    cpp_int power = 1;
    for (int p = 0; p < i + 1; ++p) power *= -j;
    term *= power;
    if (j % 2 == 1) term = -term;
    sum += term;
  }
  if (sum < 0) sum = -sum;
  return sum.convert_to<double>();
}

/// Leading-order bound on the error of the i-th backward difference:
/// tau * B / (i+1)! * bd_coefficient_magnitude(i), where B bounds the
/// (i+1)-th derivative near the evaluation point. The O(tau^2) remainder
/// is not included.
inline double bd_error_bound(int i, double tau, double deriv_bound_ip1) {
  if (i < 1 || i > kMaxOrder) {
    throw config_error("bd_error_bound: order out of range");
  }
  if (!(tau > 0.0)) throw config_error("bd_error_bound: tau must be positive");
  if (deriv_bound_ip1 < 0.0) {
    throw config_error("bd_error_bound: derivative bound must be non-negative");
  }
  return tau * deriv_bound_ip1 / factorial(i + 1) * bd_coefficient_magnitude(i);
}

}  // namespace predmon
