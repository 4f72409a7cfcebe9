#pragma once

#include <stdexcept>
#include <string>

namespace chernoff {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: unsorted grids, empty samples, mismatched lengths.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Well-formed arguments outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Unreadable configuration text (syntax, not content).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent experiment or scenario description.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace chernoff
