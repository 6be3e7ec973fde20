#pragma once

#include <stdexcept>
#include <string>

namespace hsb {

// Input lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// An integral or moment does not converge for the requested parameters.
class DivergenceError : public DomainError {
public:
  using DomainError::DomainError;
};

// A right-hand side violates the compatibility condition of a projected solve.
class SolvabilityError : public DomainError {
public:
  using DomainError::DomainError;
};

// Numerical failure with valid inputs (singular system, ill-conditioned fit).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An iterative or adaptive procedure exhausted its budget.
class NonConvergenceError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace hsb
