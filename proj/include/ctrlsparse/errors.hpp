#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctrlsparse {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad files, out-of-range indices, non-finite entries.
class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

// A controllability requirement cannot be met. Carries the offending mode
// index when one is known.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what,
                           std::ptrdiff_t mode = -1)
      : Error(what), mode_(mode) {}
  std::ptrdiff_t mode() const { return mode_; }

 private:
  std::ptrdiff_t mode_;
};

// Floating point trouble: eigen solver failures, inconsistent clusters,
// determinant tests that never clear the threshold.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because the instance is too large.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctrlsparse
