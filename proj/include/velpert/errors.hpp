#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace velpert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position()` is 1-based; a position one past
/// the last character means "unexpected end of input".
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error("syntax error at position " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Expression evaluated outside its domain (division by zero, log of a
/// non-positive number, non-finite result, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive Chebyshev construction hit the degree cap without tail decay.
class UnresolvedError : public Error {
 public:
  using Error::Error;
};

/// Problem configuration is missing a key, has a bad value, etc.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unperturbed state or ghost function violates its invariants.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to converge, or a linear system was singular.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace velpert
