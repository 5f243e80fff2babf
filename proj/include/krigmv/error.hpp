#pragma once

#include <stdexcept>
#include <string>

namespace krigmv {

/// Broad failure class; the CLI maps each to an exit code.
enum class ErrorKind {
  usage,      // bad parameter or violated precondition
  data,       // unreadable/malformed/degenerate input data
  numerical,  // singular system, indefinite matrix, failed root search
};

/// Base of every exception thrown by the library. Messages are prefixed
/// with the module that raised them, e.g. "kriging: ...".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message), kind_(kind), module_(std::move(module)) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

class UsageError : public Error {
 public:
  UsageError(std::string module, const std::string& message)
      : Error(ErrorKind::usage, std::move(module), message) {}
};

class DataError : public Error {
 public:
  DataError(std::string module, const std::string& message)
      : Error(ErrorKind::data, std::move(module), message) {}
};

class NumericalError : public Error {
 public:
  NumericalError(std::string module, const std::string& message)
      : Error(ErrorKind::numerical, std::move(module), message) {}
};

/// Raised when a pivot vanishes or the 1-norm condition estimate exceeds the
/// singularity threshold.
class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(std::string module, const std::string& message, double condition_estimate)
      : NumericalError(std::move(module), message), condition_estimate_(condition_estimate) {}

  [[nodiscard]] double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

class IndefiniteMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace krigmv
