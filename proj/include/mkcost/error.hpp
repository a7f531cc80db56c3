#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mkcost {

/// Base class of every error raised by the library. Errors of this family
/// are "domain" errors: the input was understood but cannot be processed.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A syntax or static-semantics error in program text, with a 1-based
/// source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Resolution of a term through a substitution exceeded the depth guard.
/// Only reachable with the occurs check disabled.
class CyclicTermError : public Error {
 public:
  using Error::Error;
};

class EngineError : public Error {
 public:
  using Error::Error;
};

class FactorError : public Error {
 public:
  using Error::Error;
};

class BenchError : public Error {
 public:
  using Error::Error;
};

}  // namespace mkcost
