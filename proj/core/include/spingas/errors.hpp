#pragma once

#include <stdexcept>

namespace spingas {

// Error taxonomy mirrors the CLI exit categories:
// config -> 2, capacity -> 3, numeric invariant -> 4, io -> 5.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

// Violated numerical invariant: non-Hermitian input, PSD violation,
// norm drift, geometry inconsistencies and the like.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Programmatic misuse (bad pair indices, dimension mismatch). Treated as a
// numeric-invariant violation by the CLI.
class InvalidInputError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Could not place all balls without overlap within the attempt budget.
class PackingError : public CapacityError {
 public:
  using CapacityError::CapacityError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spingas
