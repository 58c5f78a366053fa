#include "hybcav/errors.hpp"

#include <utility>

namespace hybcav {

namespace {

std::string located(const std::string& message, std::size_t line, const std::string& key) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!key.empty()) out += "'" + key + "': ";
  return out + message;
}

}  // namespace

ConfigError::ConfigError(std::string message, std::size_t line, std::string key)
    : Error(located(message, line, key)), line_(line), key_(std::move(key)) {}

NoConvergence::NoConvergence(std::string message, int iterations, double residual)
    : NumericError(message + " (" + std::to_string(iterations) + " iterations, residual " +
                   std::to_string(residual) + ")"),
      iterations_(iterations),
      residual_(residual) {}

}  // namespace hybcav
