#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hflag {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched dimensions, grids or shapes.
struct DimensionError : Error {
  using Error::Error;
};

// Arguments outside the domain of an operation (lambda = 0, off-grid bins, ...).
struct DomainError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// A numerical procedure could not produce a trustworthy answer.
struct NumericalError : Error {
  using Error::Error;
};

struct NonInvertibleError : NumericalError {
  NonInvertibleError(const std::string& what, std::vector<double> lambdas)
      : NumericalError(what), offending_lambdas(std::move(lambdas)) {}
  std::vector<double> offending_lambdas;
};

struct DivergenceError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace hflag
