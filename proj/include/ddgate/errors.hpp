#pragma once

#include <stdexcept>
#include <string>

namespace ddgate {

// Precondition violations throw std::invalid_argument. The two types below
// carry the failures the CLI maps onto distinct exit codes.

/// A numerical procedure did not converge or produced an unusable result.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ddgate
