#pragma once

#include <stdexcept>
#include <string>

namespace mel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violated by the caller.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured size guard (field size, grid points, matrix columns) would be exceeded.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// Instance text rejected by the parser; carries a 1-based line/column.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// An internal consistency check failed (unsound kernel, containment violation, ...).
class SoundnessError : public Error {
 public:
  using Error::Error;
};

}  // namespace mel
