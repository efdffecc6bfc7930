#pragma once

#include <stdexcept>
#include <string>

namespace strichartz {

// Invalid arguments: bad dimension, out-of-range parameter, mismatched sizes.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation ran but could not meet its accuracy or convergence contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace strichartz
