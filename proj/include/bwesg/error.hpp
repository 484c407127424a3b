#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bwesg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input record. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptyDocumentError : public Error {
 public:
  using Error::Error;
};

class UnknownWordError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptyContextError : public Error {
 public:
  using Error::Error;
};

class PairingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bwesg
