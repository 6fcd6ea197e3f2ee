#pragma once

#include <stdexcept>
#include <string>

namespace scorecard {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad indices, inconsistent dimensions, unparsable files.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition failed (degenerate class, zero variance, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An optimization sub-problem did not produce an optimal point.
class SolveError : public Error {
 public:
  using Error::Error;
};

}  // namespace scorecard
