#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rotormesh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number where it was detected.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A linear system that is singular or too ill-conditioned to trust.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double condition)
      : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace rotormesh
