#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemolab/grid.hpp"
#include "chemolab/state.hpp"

namespace chemolab {

enum class ScenarioKind { Constant, SmallMassBump, NegativeEnergyBump, Custom };

/// Radial profile sampled at increasing radii; linearly interpolated onto the
/// cell centres and held constant outside the tabulated range.
struct ProfileTable {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> v;
};

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Constant;
  double level = 1.0;    // Constant: u0 = v0 = level
  double mass = 1.0;     // bump kinds; optional rescale target for Custom
  double width = 0.5;    // SmallMassBump support radius
  double epsilon = 0.0;  // NegativeEnergyBump support radius, in (0, R/4]
  ProfileTable table;    // Custom
  bool rescale_custom = false;

  static ScenarioSpec constant(double level);
  static ScenarioSpec small_mass_bump(double mass, double width);
  static ScenarioSpec negative_energy_bump(double mass, double epsilon);
  static ScenarioSpec custom(ProfileTable table, std::optional<double> mass = std::nullopt);
};

std::string_view to_string(ScenarioKind kind);
/// Throws ConfigError for unknown names.
ScenarioKind parse_scenario_kind(std::string_view name);

/// (1 - (r/eps)^2)^2 on [0, eps], zero outside. C^1 with compact support.
double bump_profile(double r, double eps);

/// Builds (u0, v0) at t = 0. Bump kinds rescale u0 so that its discrete
/// integral equals the requested mass; v0 is the Helmholtz lift of u0.
/// Throws ConfigError on non-positive parameters, eps outside (0, R/4], or a
/// bump too narrow to touch any cell centre.
State make_initial(const RadialGrid& grid, const ScenarioSpec& spec);

struct EnergyReport {
  double mass = 0.0;
  double energy = 0.0;
  double sup_u = 0.0;
  double sup_v = 0.0;
};

EnergyReport energy_report(const RadialGrid& grid, const State& state);

}  // namespace chemolab
