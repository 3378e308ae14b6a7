#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpx {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data (files, tensors, edge lists).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  /// 1-based line number of the offending input line, 0 if not applicable.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Operand shapes that do not fit together, or a violated precondition.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed, or a quantity is numerically meaningless.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpx
