#pragma once

#include <stdexcept>
#include <string>

namespace kummer {

/// Malformed or inconsistent input (dimension mismatch, non-composable maps,
/// violated preconditions the caller is responsible for).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// The operation is well posed but not supported on this input,
/// e.g. a finite-group algorithm applied to a group with free part.
class UnsupportedError : public std::domain_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::domain_error(what) {}
};

/// A structural check failed (tower validation, ill-defined homomorphism).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kummer
