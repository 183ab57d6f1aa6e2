#pragma once

#include <stdexcept>
#include <string>

namespace cwm {

/// Base of every error raised by the library. The CLI maps the concrete
/// subclasses onto exit codes (validation 2, numerical 3, I/O 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Cholesky failed: the pivot at `pivot()` was not strictly positive.
class NotSpdError : public NumericalError {
 public:
  NotSpdError(int pivot, double value)
      : NumericalError("matrix is not positive definite (pivot " + std::to_string(pivot) +
                       " = " + std::to_string(value) + ")"),
        pivot_(pivot) {}
  int pivot() const noexcept { return pivot_; }

 private:
  int pivot_;
};

}  // namespace cwm
