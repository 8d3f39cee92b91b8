#pragma once

#include <stdexcept>
#include <string>

namespace limecep {

// Query text could not be parsed. `position` is a 0-based offset into the input.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string message, std::size_t position)
        : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

// A predicate referenced a payload attribute the event does not carry.
class MalformedEventError : public std::runtime_error {
  public:
    explicit MalformedEventError(const std::string& message) : std::runtime_error(message) {}
};

// Invalid engine, pattern, or experiment configuration.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

// An exhaustive enumeration would exceed its work budget.
class CapacityError : public std::runtime_error {
  public:
    explicit CapacityError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace limecep
