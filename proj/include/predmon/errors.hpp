#pragma once

#include <stdexcept>
#include <string>

namespace predmon {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, unknown names, out-of-range arguments.
class config_error : public error {
 public:
  using error::error;
};

/// Non-finite values, shape mismatches, misaligned grids.
class data_error : public error {
 public:
  using error::error;
};

/// Window shorter than the requested difference order.
class stencil_error : public error {
 public:
  using error::error;
};

/// Numerical integration left the admissible state region.
class simulation_error : public error {
 public:
  using error::error;
};

/// File I/O or parse failure.
class io_error : public error {
 public:
  using error::error;
};

}  // namespace predmon
