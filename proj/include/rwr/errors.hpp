#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rwr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed edge-list input. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input violates a data invariant (non-positive weight, bad permutation, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range parameter such as a restart probability outside (0,1) or K < 1.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Tiny pivot during LU or triangular inversion.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// Unknown node label or id.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Corrupt, truncated or incompatible index file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// API used out of its documented order.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace rwr
