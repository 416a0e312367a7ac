#include "chemolab/state.hpp"

#include "chemolab/error.hpp"

namespace chemolab {

void check_initial_state(const RadialGrid& grid, const State& state) {
  grid.check_field(state.u);
  grid.check_field(state.v);
  if (!state.u.all_finite() || !state.v.all_finite()) throw ConfigError("initial state contains non-finite values");
  if (state.u.min() < 0.0) throw ConfigError("initial density u0 must be nonnegative");
  if (state.v.min() < 0.0) throw ConfigError("initial signal v0 must be nonnegative");
  if (!(state.u.max() > 0.0)) throw ConfigError("initial density u0 must not vanish identically");
  if (!(state.t >= 0.0)) throw ConfigError("initial time must be nonnegative");
}

}  // namespace chemolab
