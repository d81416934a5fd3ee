#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace holo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented contract (dangling edge, overlapping clusters, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Malformed file content. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, std::size_t line, const std::string& what)
      : Error(where + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Rejected configuration value or unknown configuration key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace holo
