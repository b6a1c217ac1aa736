#pragma once

#include <stdexcept>
#include <string>

namespace bsar {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside the domain where a formula is defined
/// (alpha == 1, h <= 0, alpha >= 0 where a pencil is required, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quantity that does not exist for the requested slow time, e.g. the
/// critical times below the threshold s0.
class UndefinedRegion : public Error {
 public:
  using Error::Error;
};

/// Degenerate geometry: single-point ellipses, vanishing covectors,
/// degenerate pencil elements where a circle was required.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Operation not available in the current acquisition mode.
class ModeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class CorruptHeader : public IoError {
 public:
  using IoError::IoError;
};

class ChecksumMismatch : public IoError {
 public:
  using IoError::IoError;
};

class VersionMismatch : public IoError {
 public:
  using IoError::IoError;
};

class RoleMismatch : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace bsar
