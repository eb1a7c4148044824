#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "predmon/errors.hpp"
#include "predmon/numdiff.hpp"

namespace predmon {

/// One timestamped state sample.
struct Sample {
  double time = 0.0;
  std::vector<double> state;
};

/// A window of uniformly spaced samples, oldest first.
struct Stencil {
  std::vector<Sample> samples;
  double tau = 0.0;
};

/// Degree-l polynomial extrapolation model anchored at the newest sample.
/// derivs[d][i-1] holds the i-th backward-difference derivative estimate of
/// state dimension d.
struct TaylorModel {
  double base_time = 0.0;
  std::vector<double> base_state;
  std::vector<std::vector<double>> derivs;
  int degree = 0;
};

/// Predicted states for the next h sampling instances; states[m-1] predicts
/// the state at base_time + m*tau.
struct PredictionSet {
  double base_time = 0.0;
  double tau = 0.0;
  std::vector<std::vector<double>> states;
};

namespace detail {

inline void check_stencil(const Stencil& stencil, int min_length) {
  if (!(stencil.tau > 0.0)) throw config_error("stencil: tau must be positive");
  if (static_cast<int>(stencil.samples.size()) < min_length) {
    throw stencil_error("stencil: need at least " + std::to_string(min_length) +
                        " samples, got " + std::to_string(stencil.samples.size()));
  }
  const std::size_t dim = stencil.samples.front().state.size();
  if (dim < 1) throw data_error("stencil: empty state vector");
  const double tol = 1e-9 * stencil.tau;
  for (std::size_t k = 0; k < stencil.samples.size(); ++k) {
    const Sample& s = stencil.samples[k];
    if (s.state.size() != dim) throw data_error("stencil: inconsistent state dimension");
    for (double v : s.state) {
      if (!std::isfinite(v)) throw data_error("stencil: non-finite state");
    }
    if (k > 0) {
      const double dt = s.time - stencil.samples[k - 1].time;
      if (std::abs(dt - stencil.tau) > tol) {
        throw data_error("stencil: non-uniform sample spacing");
      }
    }
  }
}

/// Horner evaluation of x0 + sum_i derivs[i-1]/i! * dt^i.
inline double evaluate_dim(double base, std::span<const double> derivs, double dt) {
  const int degree = static_cast<int>(derivs.size());
  double acc = 0.0;
  for (int i = degree; i >= 1; --i) {
    acc = derivs[i - 1] / factorial(i) + acc * dt;
  }
  return base + acc * dt;
}

}  // namespace detail

/// Builds the extrapolation model from the newest degree+1 samples of the
/// stencil, estimating derivatives per dimension by iterated backward
/// differencing.
inline TaylorModel fit(const Stencil& stencil, int degree) {
  if (degree < 1 || degree > kMaxOrder) {
    throw config_error("fit: degree out of range");
  }
  detail::check_stencil(stencil, degree + 1);

  const std::size_t length = stencil.samples.size();
  const std::size_t offset = length - (degree + 1);
  const std::size_t dim = stencil.samples.front().state.size();

  TaylorModel model;
  model.base_time = stencil.samples.back().time;
  model.base_state = stencil.samples.back().state;
  model.degree = degree;
  model.derivs.resize(dim);

  std::vector<double> column(degree + 1);
  for (std::size_t d = 0; d < dim; ++d) {
    for (int k = 0; k <= degree; ++k) column[k] = stencil.samples[offset + k].state[d];
    model.derivs[d].resize(degree);
    backward_differences({column, stencil.tau}, model.derivs[d]);
  }
  return model;
}

/// Evaluates the model at time s (Horner form per dimension).
inline std::vector<double> evaluate(const TaylorModel& model, double s) {
  if (!std::isfinite(s)) throw data_error("evaluate: non-finite time");
  const double dt = s - model.base_time;
  std::vector<double> out(model.base_state.size());
  for (std::size_t d = 0; d < out.size(); ++d) {
    out[d] = detail::evaluate_dim(model.base_state[d], model.derivs[d], dt);
  }
  return out;
}

/// Fits once at the newest sample and extrapolates to the next h sampling
/// instances.
inline PredictionSet predict_horizon(const Stencil& stencil, int degree, int h) {
  if (h < 1) throw config_error("predict_horizon: horizon must be positive");
  const TaylorModel model = fit(stencil, degree);
  PredictionSet prediction;
  prediction.base_time = model.base_time;
  prediction.tau = stencil.tau;
  prediction.states.reserve(h);
  for (int m = 1; m <= h; ++m) {
    prediction.states.push_back(evaluate(model, model.base_time + m * stencil.tau));
  }
  return prediction;
}

/// Leading-order bound on |xi(t + m*tau) - prediction|:
///   B_{l+1}/(l+1)! * (m*tau)^{l+1}
///   + tau * sum_{p=1}^{l} B_{p+1}/(p+1)! * bd_coefficient_magnitude(p).
/// deriv_bounds[p-1] must bound the p-th derivative, p = 1..degree+1.
/// The O(tau^2) remainder is not included.
inline double prediction_error_bound(int degree, int m, double tau,
                                     std::span<const double> deriv_bounds) {
  if (degree < 1 || degree > kMaxOrder) {
    throw config_error("prediction_error_bound: degree out of range");
  }
  if (m < 1) throw config_error("prediction_error_bound: m must be positive");
  if (!(tau > 0.0)) throw config_error("prediction_error_bound: tau must be positive");
  if (static_cast<int>(deriv_bounds.size()) != degree + 1) {
    throw config_error("prediction_error_bound: need degree+1 derivative bounds");
  }
  for (double b : deriv_bounds) {
    if (!(b >= 0.0)) throw config_error("prediction_error_bound: bounds must be non-negative");
  }
  double bound = deriv_bounds[degree] / factorial(degree + 1) *
                 std::pow(m * tau, degree + 1);
  for (int p = 1; p <= degree; ++p) {
    bound += tau * deriv_bounds[p] / factorial(p + 1) * bd_coefficient_magnitude(p);
  }
  return bound;
}

}  // namespace predmon
