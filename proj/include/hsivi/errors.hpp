#pragma once

#include <stdexcept>
#include <string>

namespace hsivi {

// Bad shapes, unsupported option combinations, malformed configs.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mathematically invalid input (log of non-positive value, alpha out of range).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// API misuse: non-scalar backward root, missing gradient key, mode mismatch.
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable or inconsistent files (checkpoints, cached artifacts).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hsivi
