#include "chemolab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chemolab/diagnostics.hpp"
#include "chemolab/error.hpp"

namespace chemolab {

ScenarioSpec ScenarioSpec::constant(double level) {
  ScenarioSpec s;
  s.kind = ScenarioKind::Constant;
  s.level = level;
  return s;
}

ScenarioSpec ScenarioSpec::small_mass_bump(double mass, double width) {
  ScenarioSpec s;
  s.kind = ScenarioKind::SmallMassBump;
  s.mass = mass;
  s.width = width;
  return s;
}

ScenarioSpec ScenarioSpec::negative_energy_bump(double mass, double epsilon) {
  ScenarioSpec s;
  s.kind = ScenarioKind::NegativeEnergyBump;
  s.mass = mass;
  s.epsilon = epsilon;
  return s;
}

ScenarioSpec ScenarioSpec::custom(ProfileTable table, std::optional<double> mass) {
  ScenarioSpec s;
  s.kind = ScenarioKind::Custom;
  s.table = std::move(table);
  if (mass) {
    s.mass = *mass;
    s.rescale_custom = true;
  }
  return s;
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Constant:
      return "constant";
    case ScenarioKind::SmallMassBump:
      return "small_mass_bump";
    case ScenarioKind::NegativeEnergyBump:
      return "negative_energy_bump";
    case ScenarioKind::Custom:
      return "custom";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (auto kind : {ScenarioKind::Constant, ScenarioKind::SmallMassBump, ScenarioKind::NegativeEnergyBump,
                    ScenarioKind::Custom}) {
    if (name == to_string(kind)) return kind;
  }
  throw ConfigError("unknown scenario kind '" + std::string(name) + "'");
}

double bump_profile(double r, double eps) {
  if (r >= eps) return 0.0;
  const double q = 1.0 - (r / eps) * (r / eps);
  return q * q;
}

namespace {

Field normalized_bump(const RadialGrid& grid, double mass, double support) {
  Field u(grid.cells());
  const auto r = grid.centers();
  for (std::size_t i = 0; i < grid.cells(); ++i) u[i] = bump_profile(r[i], support);
  const double total = integrate(grid, u);
  if (!(total > 0.0)) {
    std::ostringstream os;
    os << "scenario: bump of radius " << support << " misses every cell centre (h = " << grid.spacing() << ")";
    throw ConfigError(os.str());
  }
  for (double& x : u) x *= mass / total;
  return u;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double s = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return ys[j - 1] + s * (ys[j] - ys[j - 1]);
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "scenario: " << what << " must be positive, got " << value;
    throw ConfigError(os.str());
  }
}

}  // namespace

State make_initial(const RadialGrid& grid, const ScenarioSpec& spec) {
  State state;
  state.t = 0.0;
  switch (spec.kind) {
    case ScenarioKind::Constant:
      require_positive(spec.level, "constant level");
      state.u = Field(grid.cells(), spec.level);
      state.v = Field(grid.cells(), spec.level);
      break;
    case ScenarioKind::SmallMassBump:
      require_positive(spec.mass, "mass");
      require_positive(spec.width, "width");
      if (spec.width > grid.radius()) throw ConfigError("scenario: bump width exceeds the ball radius");
      state.u = normalized_bump(grid, spec.mass, spec.width);
      state.v = helmholtz_solve(grid, state.u);
      break;
    case ScenarioKind::NegativeEnergyBump:
      require_positive(spec.mass, "mass");
      if (!(spec.epsilon > 0.0) || spec.epsilon > 0.25 * grid.radius() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "scenario: concentration radius must lie in (0, R/4], got " << spec.epsilon;
        throw ConfigError(os.str());
      }
      state.u = normalized_bump(grid, spec.mass, spec.epsilon);
      state.v = aux_w(grid, state);
      break;
    case ScenarioKind::Custom: {
      const ProfileTable& tab = spec.table;
      if (tab.r.size() < 2 || tab.u.size() != tab.r.size() || tab.v.size() != tab.r.size()) {
        throw ConfigError("scenario: custom profile needs >= 2 rows of (r, u, v)");
      }
      if (!std::is_sorted(tab.r.begin(), tab.r.end()) ||
          std::adjacent_find(tab.r.begin(), tab.r.end()) != tab.r.end()) {
        throw ConfigError("scenario: custom profile radii must increase strictly");
      }
      state.u = Field(grid.cells());
      state.v = Field(grid.cells());
      const auto r = grid.centers();
      for (std::size_t i = 0; i < grid.cells(); ++i) {
        state.u[i] = interpolate(tab.r, tab.u, r[i]);
        state.v[i] = interpolate(tab.r, tab.v, r[i]);
      }
      if (spec.rescale_custom) {
        require_positive(spec.mass, "mass");
        const double total = integrate(grid, state.u);
        if (!(total > 0.0)) throw ConfigError("scenario: custom profile has zero mass");
        for (double& x : state.u) x *= spec.mass / total;
      }
      break;
    }
  }
  check_initial_state(grid, state);
  return state;
}

EnergyReport energy_report(const RadialGrid& grid, const State& state) {
  return EnergyReport{integrate(grid, state.u), lyapunov(grid, state), state.u.max(), state.v.max()};
}

}  // namespace chemolab
