#pragma once

#include <stdexcept>
#include <string>

namespace qdisc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments outside the supported domain (bad order, bad index, θ outside 𝒟, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input data violating a structural constraint (tangent space, admissibility).
class ConstraintError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Numerical failure: conditioning, divergence, or an internal convergence bug.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace qdisc
