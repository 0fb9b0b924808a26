#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qradon {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression / file input. Carries the byte offset of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Bad argument, unknown vertex, mixed spaces, schema violation, ...
class InputError : public Error {
 public:
  using Error::Error;
};

// An instance exceeds a documented size guard.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// A join node has two or more non-K1 operands after flattening.
class JoinRuleError : public Error {
 public:
  using Error::Error;
};

// Explicit graph leaves have no polynomial rule; use the search instead.
class ExplicitLeafError : public Error {
 public:
  using Error::Error;
};

// A constructive builder was given fewer points than its size formula needs.
class InsufficientPointsError : public Error {
 public:
  using Error::Error;
};

// The star builder's connectivity hypothesis fails; carries an offending
// point set whose hull leaves every pair in distinct components.
class HypothesisError : public Error {
 public:
  HypothesisError(const std::string& msg, std::vector<std::string> witness)
      : Error(msg), witness_(std::move(witness)) {}
  const std::vector<std::string>& witness() const { return witness_; }

 private:
  std::vector<std::string> witness_;
};

}  // namespace qradon
