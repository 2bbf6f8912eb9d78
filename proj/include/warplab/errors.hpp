#pragma once

#include <stdexcept>
#include <string>

namespace warplab {

/// Bad arguments, unsupported queries, malformed config. CLI exit code 1.
class InvalidInputError : public std::runtime_error {
 public:
  explicit InvalidInputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A solver or quadrature could not meet its contract. CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace warplab
