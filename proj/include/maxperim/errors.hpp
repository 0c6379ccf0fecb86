#pragma once

#include <stdexcept>

namespace maxperim {

// Malformed arguments: dimension mismatch, out-of-range parameters.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operation not defined for the given body or measure family.
struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

// A mathematical hypothesis of a bound is violated by the inputs.
struct PreconditionError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyBodyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace maxperim
