#pragma once

#include <stdexcept>
#include <string>

namespace mcpc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (negative SIR, NaN gain, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Root finder could not bracket or converge.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Processing gain too small for the requested number of co-channel users.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Enumeration would exceed its configured size guard.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or channel input. Carries the 1-based line when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mcpc
