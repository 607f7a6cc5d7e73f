#pragma once

#include <stdexcept>
#include <string>

namespace hrm {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (negative pressure, ...).
struct DomainError : Error {
  using Error::Error;
};

/// A state vector violates positivity / admissibility (vacuum, over-compression).
struct StateError : Error {
  using Error::Error;
};

/// An iterative method failed to converge or a step-size restriction was violated.
struct NumericsError : Error {
  using Error::Error;
};

/// A model is inconsistent with its own well-posedness requirements.
struct ModelError : Error {
  using Error::Error;
};

/// Bad call-site usage (mismatched grids, too few snapshots, ...).
struct UsageError : Error {
  using Error::Error;
};

/// Configuration file problems: parse errors, unknown keys, invariant violations.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace hrm
