#pragma once

#include <stdexcept>
#include <string>

namespace qfc {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A guided-mode solve found no root in its bracket.
class CutoffError : public Error {
 public:
  using Error::Error;
};

/// A nonlinear fit failed to converge or the data are degenerate.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable input (files, binary streams).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Configuration text could not be parsed (syntax, unknown keys, bad types).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Inputs parsed fine but violate a domain invariant or precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfc
