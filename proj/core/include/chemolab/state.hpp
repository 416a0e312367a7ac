#pragma once

#include "chemolab/grid.hpp"

namespace chemolab {

/// (t, u, v): cell density and signal concentration at time t.
struct State {
  double t = 0.0;
  Field u;
  Field v;
};

/// Checks lengths, finiteness and nonnegativity (u >= 0, v >= 0, u not
/// identically zero). Throws ConfigError with the first violation found.
void check_initial_state(const RadialGrid& grid, const State& state);

}  // namespace chemolab
