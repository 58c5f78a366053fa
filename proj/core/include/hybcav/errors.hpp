#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hybcav {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physically meaningless argument (negative thickness, index below 1, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration. Carries the offending line
/// (1-based, 0 when not tied to a line) and key.
class ConfigError : public Error {
 public:
  ConfigError(std::string message, std::size_t line = 0, std::string key = {});

  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

/// Failures of the numerical machinery. The CLI maps these to exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class NoResonanceInWindow : public NumericError {
 public:
  using NumericError::NumericError;
};

class UnstableCavity : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoConvergence : public NumericError {
 public:
  NoConvergence(std::string message, int iterations, double residual);

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class NegativeGap : public NumericError {
 public:
  using NumericError::NumericError;
};

class UnclassifiedMode : public NumericError {
 public:
  using NumericError::NumericError;
};

class InvalidBudget : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace hybcav
