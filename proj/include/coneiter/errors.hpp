#pragma once

#include <stdexcept>
#include <string>

namespace coneiter {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions or otherwise malformed inputs.
class StructuralError : public Error {
public:
  using Error::Error;
};

/// A numeric parameter outside its admissible range.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// An iteration configuration that violates a schedule invariant.
class ConfigurationError : public Error {
public:
  ConfigurationError(const std::string& what, int step = 0)
      : Error(what), step_(step) {}

  /// Iteration index at which the violation was found (0 when not step-specific).
  [[nodiscard]] int step() const noexcept { return step_; }

private:
  int step_;
};

/// The user-supplied right inverse of S failed its round trip.
class InversionError : public Error {
public:
  using Error::Error;
};

/// A bound mode needs auxiliary values that a lean trace did not record.
class MissingAuxError : public Error {
public:
  using Error::Error;
};

}  // namespace coneiter
