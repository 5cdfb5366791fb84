#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tdcorpus {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or incomplete configuration (missing column, invalid parameter).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed structured input. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Referential integrity violated while writing the relational store.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Input that violates an operation's precondition (sizes, empty corpus).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace tdcorpus
