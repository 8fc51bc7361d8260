#pragma once

#include <stdexcept>

namespace dicke {

// Violated precondition or invalid physics input.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to meet its accuracy contract (non-convergence,
// step-size underflow, truncation breach, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dicke
