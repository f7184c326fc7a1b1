#pragma once

#include <stdexcept>
#include <string>

namespace topicdyn {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized data (corpus lines, model files, fixtures).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Inputs that violate a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Rejected run configuration (command-line or config-file values).
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Remote fetch failures (MediaWiki).
class FetchError : public Error {
 public:
  using Error::Error;
};

}  // namespace topicdyn
