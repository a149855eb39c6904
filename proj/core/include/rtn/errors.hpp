#pragma once

#include <stdexcept>
#include <string>

namespace rtn {

// Invalid or unsupported argument values.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A requested object exceeds a configured size cap.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerically degenerate result (non-positive contraction, complex leakage, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rtn
