#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "chemolab/grid.hpp"
#include "chemolab/motility.hpp"
#include "chemolab/scenarios.hpp"
#include "chemolab/stepper.hpp"

namespace chemolab {

/// Everything needed to reproduce one simulation.
///
/// Text form is one `key = value` per line, `#` starts a comment:
///
///     grid.n = 3
///     grid.R = 1
///     grid.M = 128
///     motility.kind = exponential        # or power_law with motility.k
///     scenario.kind = negative_energy_bump
///     scenario.m = 50
///     scenario.epsilon = R/16            # "R/x" is relative to grid.R
///     stepper.dt_init = 1e-6
///     run.T_end = 1000
///     run.samples_per_decade = 10
struct RunConfig {
  int dimension = 3;
  double radius = 1.0;
  std::size_t cells = 128;

  MotilityKind motility_kind = MotilityKind::Exponential;
  double motility_exponent = 1.0;

  ScenarioSpec scenario = ScenarioSpec::constant(1.0);
  std::filesystem::path profile_path;

  StepControl control;
  RunOptions options;
  double classify_from = 0.0;
  std::string label = "run";
  /// run.out; the --out flag takes precedence.
  std::filesystem::path output_dir;

  /// Verbatim input text and the parsed key/value pairs, echoed into meta.json.
  std::string source_text;
  std::map<std::string, std::string> entries;

  RadialGrid make_grid() const;
  MotilitySpec make_motility() const;
  /// Loads the custom profile table if needed, then builds the initial state.
  State make_initial_state(const RadialGrid& grid) const;
};

/// Keys accepted by parse_config, in canonical order.
const std::vector<std::string>& config_keys();

/// Parses the text form. Throws ConfigError on syntax errors, unknown keys
/// or values that violate a module precondition.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Returns a copy of `base` with one key replaced (used by sweeps). The
/// echoed source text gets the override appended.
RunConfig with_override(const RunConfig& base, const std::string& key, const std::string& value);

/// Reads a CSV table with header r,u,v.
ProfileTable load_profile_table(const std::filesystem::path& path);

}  // namespace chemolab
