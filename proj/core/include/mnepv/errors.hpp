// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_ERRORS_HPP
#define MNEPV_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mnepv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes do not agree (vector vs. problem, matrix tuple, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural requirement (Hermitian, skew, PSD,
/// monotone, non-finite, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A shifted linear system is singular to working precision.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel ran out of restarts. Carries the best iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value, double best_residual)
      : Error(what), best_value_(best_value), best_residual_(best_residual) {}

  double best_value() const { return best_value_; }
  double best_residual() const { return best_residual_; }

 private:
  double best_value_;
  double best_residual_;
};

/// A text input could not be parsed. `line()` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  enum class Kind {
    MalformedHeader,
    BadToken,
    IndexOutOfBounds,
    NonFinite,
    TruncatedInput,
    UnsupportedFormat,
  };

  ParseError(Kind kind, std::size_t line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

/// Filesystem failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mnepv

#endif  // MNEPV_ERRORS_HPP
