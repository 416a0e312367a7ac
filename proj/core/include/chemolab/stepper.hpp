#pragma once

#include <string_view>
#include <vector>

#include "chemolab/diagnostics.hpp"
#include "chemolab/grid.hpp"
#include "chemolab/motility.hpp"
#include "chemolab/state.hpp"

namespace chemolab {

struct StepControl {
  double dt_init = 1e-3;
  double dt_min = 1e-10;
  double dt_max = 1.0;
  double safety = 0.9;
  double growth_cap = 1.2;
  double target_rel_change = 0.05;

  /// Throws ConfigError unless 0 < dt_min <= dt_init <= dt_max,
  /// safety in (0, 1], growth_cap >= 1 and target_rel_change > 0.
  void validate() const;
};

/// Default negativity tolerance, relative to max u (or max v).
inline constexpr double kDefaultNegTolRel = 1e-12;

/// One linearly implicit step of size dt.
///
/// u-step: u' = u + dt * Delta_h(gamma(v) u') with gamma frozen at the old
/// signal, written in flux form so the mass telescopes exactly.
/// v-step: backward Euler v' = v + dt * (Delta_h v' - v' + u').
///
/// Values in [-neg_tol, 0) are clipped to zero (u is then rescaled to
/// restore its mass); anything more negative, or non-finite, throws
/// SolverFailure.
State step(const RadialGrid& grid, const MotilitySpec& spec, const State& state, double dt,
           double neg_tol_rel = kDefaultNegTolRel);

/// Next step size from the relative sup-norm change of (u, v) over the last
/// step. Limited to [dt/2, dt*growth_cap] and then to [dt_min, dt_max].
double adapt_dt(const State& prev, const State& next, double dt, const StepControl& ctl);

/// Same proposal before the [dt_min, dt_max] clamp; used to detect underflow.
double propose_dt_unclamped(const State& prev, const State& next, double dt, const StepControl& ctl);

enum class RunStatus { ReachedTEnd, SupNormGuard, DtUnderflow };
std::string_view to_string(RunStatus status);

struct RunOptions {
  double t_end = 1.0;
  /// Linear sampling period; with samples_per_decade > 0 it is instead the
  /// first positive sample time of a logarithmic schedule.
  double sample_every = 0.1;
  int samples_per_decade = 0;
  std::vector<double> snapshot_times;
  double sup_guard = 1e14;
  double neg_tol_rel = kDefaultNegTolRel;
  /// Per-step Lyapunov tolerance: F_{k+1} <= F_k + energy_tol * (1 + |F_k|).
  double energy_tol = 1e-6;
};

/// Per-step monitors accumulated over every accepted step.
struct RunMonitors {
  long steps_accepted = 0;
  long steps_retried = 0;
  double initial_mass = 0.0;
  double max_step_mass_drift_rel = 0.0;
  double total_mass_drift_rel = 0.0;
  double min_u = 0.0;
  double min_w = 0.0;
  double sup_w0 = 0.0;
  /// max over steps of w_growth_margin / sup w0.
  double max_growth_margin_rel = 0.0;
  /// max over steps of (F_{k+1} - F_k) / (1 + |F_k|); exponential motility
  /// only. The *_literal pair uses gradient weight 1 instead of 1/2.
  double max_energy_increase_rel = 0.0;
  long energy_violations = 0;
  double max_energy_increase_rel_literal = 0.0;
  long energy_violations_literal = 0;
  double max_w_residual_next = 0.0;
  double max_w_residual_prev = 0.0;
  double max_z_residual = 0.0;
  /// max over steps of |(F_{k+1} - F_k)/dt + D_k|, and the same with the
  /// signal term int v_t^2 added to D_k.
  double max_dissipation_residual = 0.0;
  double max_dissipation_residual_full = 0.0;
  /// Least-squares weight c on int |grad v|^2 that best satisfies
  /// dF_c/dt = -D over all accepted steps.
  double best_fit_gradient_weight = 0.0;
  double min_dt = 0.0;
  double max_dt = 0.0;
};

struct RunResult {
  RunStatus status = RunStatus::ReachedTEnd;
  std::vector<DiagnosticsRecord> records;
  std::vector<State> snapshots;
  State final_state;
  RunMonitors monitors;
};

/// Sample times of a run: t = 0, the linear or logarithmic schedule, and t_end.
std::vector<double> sample_schedule(const RunOptions& opts);

/// Integrates from `initial` to t_end or until sup u exceeds the guard or the
/// step controller asks for dt below dt_min. A SolverFailure at dt_min is
/// propagated.
RunResult run(const RadialGrid& grid, const MotilitySpec& spec, const State& initial, const StepControl& ctl,
              const RunOptions& opts);

}  // namespace chemolab
