#include "chemolab/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chemolab/error.hpp"

namespace chemolab {

void StepControl::validate() const {
  if (!(dt_min > 0.0) || !(dt_min <= dt_init) || !(dt_init <= dt_max) || !std::isfinite(dt_max)) {
    throw ConfigError("step control: need 0 < dt_min <= dt_init <= dt_max");
  }
  if (!(safety > 0.0 && safety <= 1.0)) throw ConfigError("step control: safety must lie in (0, 1]");
  if (!(growth_cap >= 1.0)) throw ConfigError("step control: growth_cap must be >= 1");
  if (!(target_rel_change > 0.0)) throw ConfigError("step control: target_rel_change must be positive");
}

namespace {

// Clips values in [-tol, 0) and reports whether anything was clipped.
bool clip_small_negatives(Field& f, double tol_rel, const char* name) {
  const double tol = tol_rel * std::max(f.max(), 0.0);
  bool clipped = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) {
      std::ostringstream os;
      os << "step: non-finite " << name << " in cell " << i;
      throw SolverFailure(os.str());
    }
    if (f[i] < 0.0) {
      if (f[i] < -tol) {
        std::ostringstream os;
        os << "step: " << name << "[" << i << "] = " << f[i] << " below negativity tolerance " << -tol;
        throw SolverFailure(os.str());
      }
      f[i] = 0.0;
      clipped = true;
    }
  }
  return clipped;
}

}  // namespace

State step(const RadialGrid& grid, const MotilitySpec& spec, const State& state, double dt, double neg_tol_rel) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("step: dt must be positive and finite");
  grid.check_field(state.u);
  grid.check_field(state.v);

  const std::size_t m = grid.cells();
  const auto k = grid.face_conductances();
  const auto vol = grid.cell_volumes();

  std::vector<double> gamma(m);
  for (std::size_t i = 0; i < m; ++i) gamma[i] = eval_gamma(spec, state.v[i]);

  // Both sub-steps are solved for the increment. The right-hand side is a sum
  // of face fluxes of the old state, so a constant state produces an exactly
  // zero right-hand side and stays constant bit for bit at any dt.
  //
  // u-step, rows scaled by cell volume. Column sums of the scaled matrix equal
  // the cell volumes, which is the discrete mass balance.
  std::vector<double> lower(m, 0.0), diag(m), upper(m, 0.0), rhs(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) diag[i] = vol[i];
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double c = dt * k[i];
    diag[i] += c * gamma[i];
    diag[i + 1] += c * gamma[i + 1];
    upper[i] = -c * gamma[i + 1];
    lower[i + 1] = -c * gamma[i];
    const double flux = c * (gamma[i + 1] * state.u[i + 1] - gamma[i] * state.u[i]);
    rhs[i] += flux;
    rhs[i + 1] -= flux;
  }
  const std::vector<double> du = solve_tridiagonal(lower, diag, upper, rhs);
  Field u(m);
  for (std::size_t i = 0; i < m; ++i) u[i] = state.u[i] + du[i];
  if (clip_small_negatives(u, neg_tol_rel, "u")) {
    const double target = integrate(grid, state.u);
    const double actual = integrate(grid, u);
    if (actual > 0.0) {
      for (double& x : u) x *= target / actual;
    }
  }

  // v-step: backward Euler with the new density as source.
  for (std::size_t i = 0; i < m; ++i) {
    lower[i] = upper[i] = 0.0;
    diag[i] = vol[i] * (1.0 + dt);
    rhs[i] = vol[i] * dt * (u[i] - state.v[i]);
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double c = dt * k[i];
    diag[i] += c;
    diag[i + 1] += c;
    upper[i] = -c;
    lower[i + 1] = -c;
    const double flux = c * (state.v[i + 1] - state.v[i]);
    rhs[i] += flux;
    rhs[i + 1] -= flux;
  }
  const std::vector<double> dv = solve_tridiagonal(lower, diag, upper, rhs);
  Field v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = state.v[i] + dv[i];
  clip_small_negatives(v, neg_tol_rel, "v");

  return State{state.t + dt, std::move(u), std::move(v)};
}

namespace {

double relative_change(const Field& prev, const Field& next) {
  double diff = 0.0;
  for (std::size_t i = 0; i < prev.size(); ++i) diff = std::max(diff, std::abs(next[i] - prev[i]));
  const double scale = prev.max_abs();
  if (scale > 0.0) return diff / scale;
  return diff > 0.0 ? 1.0 : 0.0;
}

}  // namespace

double propose_dt_unclamped(const State& prev, const State& next, double dt, const StepControl& ctl) {
  const double observed = std::max(relative_change(prev.u, next.u), relative_change(prev.v, next.v));
  double proposal = observed > 0.0 ? dt * ctl.safety * ctl.target_rel_change / observed : dt * ctl.growth_cap;
  return std::clamp(proposal, 0.5 * dt, dt * ctl.growth_cap);
}

double adapt_dt(const State& prev, const State& next, double dt, const StepControl& ctl) {
  return std::clamp(propose_dt_unclamped(prev, next, dt, ctl), ctl.dt_min, ctl.dt_max);
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::ReachedTEnd:
      return "ReachedTEnd";
    case RunStatus::SupNormGuard:
      return "SupNormGuard";
    case RunStatus::DtUnderflow:
      return "DtUnderflow";
  }
  return "Unknown";
}

std::vector<double> sample_schedule(const RunOptions& opts) {
  std::vector<double> times{0.0};
  if (opts.samples_per_decade > 0) {
    for (int j = 0;; ++j) {
      const double t = opts.sample_every * std::pow(10.0, static_cast<double>(j) / opts.samples_per_decade);
      if (t >= opts.t_end * (1.0 - 1e-12)) break;
      times.push_back(t);
    }
  } else {
    for (long j = 1;; ++j) {
      const double t = opts.sample_every * static_cast<double>(j);
      if (t >= opts.t_end * (1.0 - 1e-12)) break;
      times.push_back(t);
    }
  }
  times.push_back(opts.t_end);
  return times;
}

RunResult run(const RadialGrid& grid, const MotilitySpec& spec, const State& initial, const StepControl& ctl,
              const RunOptions& opts) {
  check_initial_state(grid, initial);
  ctl.validate();
  if (!(opts.t_end > initial.t)) throw ConfigError("run: t_end must exceed the initial time");
  if (!(opts.sample_every > 0.0)) throw ConfigError("run: sample_every must be positive");

  const std::vector<double> samples = sample_schedule(opts);
  std::vector<double> snapshots = opts.snapshot_times;
  std::sort(snapshots.begin(), snapshots.end());
  std::erase_if(snapshots, [&](double s) { return s < initial.t || s > opts.t_end; });

  const bool track_energy = spec.is_exponential();
  const Field w0 = aux_w(grid, initial);
  const double gamma0 = eval_gamma(spec, 0.0);

  RunResult result;
  RunMonitors& mon = result.monitors;
  mon.initial_mass = integrate(grid, initial.u);
  mon.min_u = initial.u.min();
  mon.min_w = w0.min();
  mon.sup_w0 = w0.max();
  mon.min_dt = ctl.dt_max;

  State state = initial;
  std::size_t next_sample = 0;
  std::size_t next_snapshot = 0;
  while (next_sample < samples.size() && samples[next_sample] < state.t) ++next_sample;

  double last_dt = 0.0;
  double last_residual = 0.0;
  auto emit = [&](double t) {
    while (next_sample < samples.size() && samples[next_sample] <= t) {
      result.records.push_back(make_record(grid, spec, state, w0, last_dt, last_residual));
      ++next_sample;
    }
    while (next_snapshot < snapshots.size() && snapshots[next_snapshot] <= t) {
      result.snapshots.push_back(state);
      ++next_snapshot;
    }
  };
  emit(state.t);

  EnergyTerms energy = lyapunov_terms(grid, state);
  double fit_gg = 0.0, fit_gr = 0.0;
  double dt = ctl.dt_init;
  double mass_prev = mon.initial_mass;

  while (state.t < opts.t_end) {
    double event = opts.t_end;
    if (next_sample < samples.size()) event = std::min(event, samples[next_sample]);
    if (next_snapshot < snapshots.size()) event = std::min(event, snapshots[next_snapshot]);
    const double remaining = event - state.t;
    const bool truncated = dt >= remaining;
    double dt_try = truncated ? remaining : dt;

    State next;
    for (;;) {
      try {
        next = step(grid, spec, state, dt_try, opts.neg_tol_rel);
        break;
      } catch (const SolverFailure&) {
        if (dt_try <= ctl.dt_min) throw;
        dt_try = std::max(0.5 * dt_try, ctl.dt_min);
        ++mon.steps_retried;
      }
    }
    const bool landed = dt_try == remaining;
    if (landed) next.t = event;

    // Per-step monitors.
    ++mon.steps_accepted;
    mon.min_dt = std::min(mon.min_dt, dt_try);
    mon.max_dt = std::max(mon.max_dt, dt_try);
    const double mass = integrate(grid, next.u);
    mon.max_step_mass_drift_rel = std::max(mon.max_step_mass_drift_rel, std::abs(mass - mass_prev) / mon.initial_mass);
    mon.total_mass_drift_rel = std::max(mon.total_mass_drift_rel, std::abs(mass - mon.initial_mass) / mon.initial_mass);
    mass_prev = mass;
    mon.min_u = std::min(mon.min_u, next.u.min());
    mon.min_w = std::min(mon.min_w, aux_w(grid, next).min());
    if (mon.sup_w0 > 0.0) {
      mon.max_growth_margin_rel =
          std::max(mon.max_growth_margin_rel, w_growth_margin(grid, next, w0, gamma0) / mon.sup_w0);
    }
    last_residual = w_identity_residual(grid, spec, state, next, dt_try, ULevel::Next);
    mon.max_w_residual_next = std::max(mon.max_w_residual_next, last_residual);
    mon.max_w_residual_prev =
        std::max(mon.max_w_residual_prev, w_identity_residual(grid, spec, state, next, dt_try, ULevel::Prev));
    mon.max_z_residual = std::max(mon.max_z_residual, z_identity_residual(grid, state, next, dt_try));
    if (track_energy) {
      const EnergyTerms energy_next = lyapunov_terms(grid, next);
      const auto increase = [&](double weight) {
        const double before = energy.total(weight);
        return (energy_next.total(weight) - before) / (1.0 + std::abs(before));
      };
      const double inc = increase(kLyapunovGradientWeight);
      const double inc_literal = increase(kLiteralGradientWeight);
      mon.max_energy_increase_rel = std::max(mon.max_energy_increase_rel, inc);
      mon.max_energy_increase_rel_literal = std::max(mon.max_energy_increase_rel_literal, inc_literal);
      if (inc > opts.energy_tol) ++mon.energy_violations;
      if (inc_literal > opts.energy_tol) ++mon.energy_violations_literal;

      const double d = dissipation(grid, spec, state).value_or(0.0);
      const double rate = (energy_next.total() - energy.total()) / dt_try;
      double vt2 = 0.0;
      {
        Field vt(grid.cells());
        for (std::size_t i = 0; i < grid.cells(); ++i) vt[i] = (next.v[i] - state.v[i]) / dt_try;
        vt2 = integrate(grid, multiply(vt, vt));
      }
      mon.max_dissipation_residual = std::max(mon.max_dissipation_residual, std::abs(rate + d));
      mon.max_dissipation_residual_full = std::max(mon.max_dissipation_residual_full, std::abs(rate + d + vt2));

      // Fit (dE0 + c dG)/dt = -D, E0 the functional without the gradient term.
      const double dg = (energy_next.gradient - energy.gradient) / dt_try;
      const double de0 = (energy_next.total(0.0) - energy.total(0.0)) / dt_try;
      fit_gg += dg * dg * dt_try;
      fit_gr += dg * (-d - de0) * dt_try;
      energy = energy_next;
    }

    const double raw = propose_dt_unclamped(state, next, dt_try, ctl);
    const bool at_floor = dt_try <= ctl.dt_min * (1.0 + 1e-12);
    if (!(landed && truncated)) dt = std::clamp(raw, ctl.dt_min, ctl.dt_max);
    last_dt = dt_try;
    state = std::move(next);
    emit(state.t);

    if (state.u.max() > opts.sup_guard) {
      result.status = RunStatus::SupNormGuard;
      break;
    }
    if (raw < ctl.dt_min && at_floor) {
      result.status = RunStatus::DtUnderflow;
      break;
    }
  }

  if (result.status != RunStatus::ReachedTEnd &&
      (result.records.empty() || result.records.back().t < state.t)) {
    result.records.push_back(make_record(grid, spec, state, w0, last_dt, last_residual));
  }
  if (fit_gg > 0.0) mon.best_fit_gradient_weight = fit_gr / fit_gg;
  result.final_state = std::move(state);
  return result;
}

}  // namespace chemolab
