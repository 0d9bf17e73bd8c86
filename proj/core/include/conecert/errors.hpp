#pragma once

#include <stdexcept>
#include <string>

namespace conecert {

// Malformed or inconsistent caller input: wrong dimensions, out-of-range
// parameters, unknown names. The CLI maps this to exit code 3.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not deliver its contract: iteration caps,
// singular pivots, enumeration limits. The CLI maps this to exit code 4.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative method hit its cap; carries the best estimate reached so far.
class ConvergenceFailure : public NumericalError {
 public:
  ConvergenceFailure(const std::string& message, double partial_estimate)
      : NumericalError(message), partial_estimate(partial_estimate) {}

  double partial_estimate;
};

}  // namespace conecert
