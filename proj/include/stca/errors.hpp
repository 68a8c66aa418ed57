#pragma once

#include <stdexcept>
#include <string>

namespace stca {

enum class ExitCode : int { ok = 0, config = 1, numeric = 2, non_convergence = 3 };

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ExitCode code) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Inputs outside an operation's domain (bad angle, empty sample set, rank out of range).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what, ExitCode::config) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what, ExitCode::config) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what, ExitCode::numeric) {}
};

/// The presumed target lies inside the jamming subspace, or a response reference is zero.
class DegenerateGeometryError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Singular single-point control denominator.
class ControlPointError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(what, ExitCode::non_convergence) {}
};

}  // namespace stca
