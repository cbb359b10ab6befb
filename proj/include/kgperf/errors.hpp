#pragma once

#include <stdexcept>
#include <string>

namespace kgperf {

/// Bad user input: malformed run config, invalid flag combinations.
/// The CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad data: referential-integrity violations, parse errors, missing
/// records. The CLI maps this to exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kgperf
