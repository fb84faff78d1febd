#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace bdlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: dimension mismatches, non-symmetric
/// matrices, invalid grids, violated preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Expression grammar violation. `position()` is the 0-based character
/// offset of the offending token.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at column " + std::to_string(position + 1)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A requested operation needs finer resolution than the grid provides.
class ResolutionError : public InputError {
 public:
  using InputError::InputError;
};

/// The recession ladder diverged or failed to converge at a direction the
/// caller required.
class RecessionError : public Error {
 public:
  using Error::Error;
};

/// The differential inclusion has no solution for the supplied data.
class NotSolvable : public Error {
 public:
  NotSolvable(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A numerical search hit non-finite integrand values.
class SearchAbort : public Error {
 public:
  using Error::Error;
};

}  // namespace bdlab
