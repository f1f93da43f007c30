#pragma once

#include <stdexcept>
#include <string>

namespace hierdoc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or a document that violates its schema. The CLI maps this to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Shape mismatch or other misuse of the numeric substrate.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite gradient or loss during optimisation.
class DivergedError : public Error {
 public:
  DivergedError() : Error("diverged") {}
  explicit DivergedError(const std::string& what) : Error("diverged: " + what) {}
};

}  // namespace hierdoc
