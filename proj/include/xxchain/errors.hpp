// errors.hpp: exception types shared by every module.

#pragma once

#include <stdexcept>
#include <string>

namespace xxchain {

// Physical parameters outside the model's domain (n, epsilon, kappa, rates, temperatures).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed matrix shapes or dimension mismatches.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative numerical routine failed or a numerical guarantee could not be met.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The null space of a generator is not one-dimensional.
class DegenerateKernelError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A cross-check between two independent routes disagreed, or a state failed its validity gates.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration input (unknown keys, unparsable values, inconsistent grids).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xxchain
