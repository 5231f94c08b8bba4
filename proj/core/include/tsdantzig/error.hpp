#pragma once

#include <stdexcept>
#include <string>

namespace tsdantzig {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The computation could not produce a trustworthy numeric result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A pivot fell below the singularity threshold during elimination.
class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A linear program that had to be feasible was not.
class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace tsdantzig
