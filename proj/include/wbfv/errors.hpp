#pragma once

#include <stdexcept>
#include <string>

namespace wbfv {

/// Rejected user input: bad grid, negative initial density, malformed config.
class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A run produced a non-finite value or broke the positivity contract.
class NumericalFault : public std::runtime_error {
public:
  explicit NumericalFault(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wbfv
