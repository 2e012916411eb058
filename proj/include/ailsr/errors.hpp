#pragma once

#include <stdexcept>

namespace ailsr {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched tensor / array shapes.
struct ShapeError : Error {
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// Filesystem / decode failures.
struct IoError : Error {
  using Error::Error;
};

// A file exists but its contents fail validation (magic, checksum, truncation).
struct CorruptFileError : IoError {
  using IoError::IoError;
};

// A file has a recognised layout but an unsupported format version.
struct VersionMismatchError : IoError {
  using IoError::IoError;
};

}  // namespace ailsr
