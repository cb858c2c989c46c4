#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rewave {

// Bad user input: malformed config file, invalid override, violated
// precondition on a CLI argument.  Maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure with the offending path attached.  Exit code 4.
struct IoError : std::runtime_error {
  IoError(const std::string& what, std::string path_arg)
      : std::runtime_error(what + ": " + path_arg), path(std::move(path_arg)) {}
  std::string path;
};

// A class could not reach its image quota even after the adjustment ladder
// bottomed out.  Exit code 3.
struct ClassGenerationError : std::runtime_error {
  ClassGenerationError(std::uint32_t id, const std::string& why)
      : std::runtime_error("class " + std::to_string(id) + ": " + why),
        class_id(id) {}
  std::uint32_t class_id;
};

}  // namespace rewave
