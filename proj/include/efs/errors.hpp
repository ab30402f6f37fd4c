#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace efs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration (non-finite input, out-of-range parameter).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a point where the potential or kernel is not defined.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver produced non-finite iterates.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// Degenerate geometry, e.g. all particles coincide.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content. `line()` is 1-based, 0 when not line oriented.
class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : IoError(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace efs
