#pragma once

#include <stdexcept>
#include <string>

namespace irratlab {

/// A caller violated an operation's precondition (bad argument, empty input,
/// division by zero, ...). The CLI maps these to exit code 2.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precomputed resource (prime table, digit buffer) is too small.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interval arithmetic could not decide a question within the precision cap.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative procedure hit its iteration cap without converging.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace irratlab
