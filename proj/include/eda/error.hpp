#pragma once

#include <stdexcept>
#include <string>

namespace eda {

/// Raised for invalid parameters, dimension mismatches and malformed input
/// files. Budget exhaustion is never reported through exceptions.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace eda
