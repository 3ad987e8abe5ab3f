#pragma once

#include <stdexcept>
#include <string>

namespace bcl {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probability mass lost to Fock levels above the cutoff exceeds the budget,
/// or an adequacy precondition (photon number vs. dimension) is violated.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions are inconsistent (e.g. partial trace of a non-square
/// composite, tensor factors with different truncations).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A density matrix turned out not to be positive semidefinite beyond
/// numerical jitter; signals an invalid state produced upstream.
class SpectrumError : public Error {
 public:
  using Error::Error;
};

/// Quadrature grid inadequate for the requested integral.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Requested object exceeds the configured resource cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace bcl
