#pragma once

#include <stdexcept>
#include <string>

namespace tracekit {

// Argument and domain violations. The CLI maps these to exit code 2.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// File and format problems. The CLI maps these to exit code 3.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonSquareError : public DomainError {
 public:
  using DomainError::DomainError;
};

class AsymmetricError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DimensionMismatchError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidSpecError : public DomainError {
 public:
  using DomainError::DomainError;
};

class CapExceededError : public DomainError {
 public:
  using DomainError::DomainError;
};

class EmptyListError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonPositiveTraceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedFieldError : public ParseError {
 public:
  using ParseError::ParseError;
};

class NoConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tracekit
