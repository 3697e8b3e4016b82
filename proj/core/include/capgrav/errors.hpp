#pragma once

#include <stdexcept>
#include <string>

namespace capgrav {

/// Inputs violate a precondition (bad parameter range, malformed config).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A closed-form path was requested for constants outside the regimes it
/// covers; callers should fall back to numerical integration.
class RegimeUnsupportedError : public std::runtime_error {
 public:
  explicit RegimeUnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

/// A Case I operation was invoked with c0 != c (or vice versa).
class WrongCaseError : public std::runtime_error {
 public:
  explicit WrongCaseError(const std::string& what) : std::runtime_error(what) {}
};

/// An iteration failed to converge or a step size underflowed.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be opened or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace capgrav
