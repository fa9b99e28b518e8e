#pragma once

#include <stdexcept>
#include <string>

namespace symmkern {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition: bad parameters, mismatched spaces, invalid points.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Argument sits on a pole of a Gamma factor.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Factorization failure, invariant lost to roundoff, underflow.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A quadrature did not settle under refinement, or its tail bound failed.
class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace symmkern
