#pragma once

#include <stdexcept>

namespace cayley {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input document.
struct ParseError : Error {
  using Error::Error;
};

/// An enumeration cap or exact-arithmetic budget was exceeded.
struct CapExceededError : Error {
  using Error::Error;
};

/// A template parameter lies on a strict-inequality boundary, so pattern
/// admissibility is not well defined at the requested tolerance.
struct BoundaryParameterError : Error {
  using Error::Error;
};

/// Two independent computations of the same quantity disagreed.
struct InternalInconsistencyError : Error {
  using Error::Error;
};

/// An iterative numeric routine failed to converge within its budget.
struct NumericalFailureError : Error {
  using Error::Error;
};

}  // namespace cayley
