#pragma once

#include <stdexcept>
#include <string>

namespace chemolab {

/// Invalid user-supplied parameters (grid size, motility, scenario, run config).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A time step produced a state that violates positivity or finiteness.
class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Broken internal invariant; should never escape a correct build.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace chemolab
