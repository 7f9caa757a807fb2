#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument values (poles, out-of-range parameters).
class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Caller violated an operation contract (grid mismatch, bad field state).
class ContractError : public Error {
public:
  explicit ContractError(const std::string& msg) : Error(msg) {}
};

// Iterative solver did not reach the requested tolerance.
class SolverError : public Error {
public:
  SolverError(const std::string& msg, double last_residual)
      : Error(msg), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

private:
  double last_residual_;
};

// Numerically ambiguous kernel: more than one eigenvalue near zero.
class DegeneracyError : public Error {
public:
  explicit DegeneracyError(const std::string& msg) : Error(msg) {}
};

// Malformed file contents or unknown format version.
class FormatError : public Error {
public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
};

// Bad run configuration (unknown key, type mismatch, missing key).
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Filesystem failure.
class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace liouville
