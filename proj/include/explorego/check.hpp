#pragma once

#include <stdexcept>
#include <string>

namespace explorego {

/// Raised when user-supplied configuration is invalid. Messages carry the
/// offending field path where one exists.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contract violations (caller broke a documented precondition).
inline void check(bool condition, const char* message) {
  if (!condition) throw std::logic_error(std::string("contract violation: ") + message);
}

inline void check_config(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

}  // namespace explorego
