#pragma once

#include <stdexcept>
#include <string>

namespace schro {

// Invalid user-facing configuration (grid parameters, config files, CLI).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Gauge selection on a zero-mass field is undefined.
struct ZeroMassError : std::runtime_error {
  explicit ZeroMassError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive loop cannot proceed (h fell below h_min while rejecting).
struct StepUnderflowError : std::runtime_error {
  explicit StepUnderflowError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace schro
