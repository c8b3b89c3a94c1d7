#pragma once

#include <stdexcept>
#include <string>

namespace zpf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or configuration value is out of its allowed range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not reach its accuracy target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Mode grid construction produced no modes.
class EmptyGridError : public ValidationError {
 public:
  EmptyGridError() : ValidationError("empty grid: no wavevector satisfies the frequency cutoff") {}
};

/// A realization was used with a grid other than the one it was drawn on.
class GridMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw ValidationError(what);
}

}  // namespace zpf
