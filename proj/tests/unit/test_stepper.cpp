#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "chemolab/error.hpp"
#include "chemolab/scenarios.hpp"
#include "chemolab/stepper.hpp"

using namespace chemolab;

namespace {

State random_state(const RadialGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  State s{0.0, Field(g.cells()), Field(g.cells())};
  for (std::size_t i = 0; i < g.cells(); ++i) {
    s.u[i] = dist(rng);
    s.v[i] = dist(rng);
  }
  return s;
}

State smooth_state(const RadialGrid& g) {
  State s{0.0, Field(g.cells()), Field(g.cells())};
  for (std::size_t i = 0; i < g.cells(); ++i) {
    const double c = std::cos(std::numbers::pi * g.centers()[i]);
    s.u[i] = 1.0 + 0.5 * c;
    s.v[i] = 1.0 + 0.3 * c;
  }
  return s;
}

State integrate_fixed(const RadialGrid& g, const MotilitySpec& m, State s, double dt, double t_end) {
  const long n = std::lround(t_end / dt);
  for (long k = 0; k < n; ++k) s = step(g, m, s, dt);
  return s;
}

double sup_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

const MotilitySpec kExp = MotilitySpec::exponential();

}  // namespace

TEST(StepControl, Validation) {
  EXPECT_NO_THROW(StepControl{}.validate());
  StepControl c;
  c.dt_min = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = StepControl{};
  c.dt_init = 2.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = StepControl{};
  c.safety = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = StepControl{};
  c.growth_cap = 0.9;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Step, ConstantStatesAreExactFixedPoints) {
  for (int n : {1, 3, 4}) {
    const RadialGrid g(n, 1.0, 64);
    for (double c : {0.01, 1.0, 25.0}) {
      for (double dt : {1e-8, 1e-3, 1.0, 1e3}) {
        State s{0.0, Field(64, c), Field(64, c)};
        for (int k = 0; k < 20; ++k) s = step(g, kExp, s, dt);
        EXPECT_EQ(s.u, Field(64, c));
        EXPECT_EQ(s.v, Field(64, c));
      }
    }
  }
}

TEST(Step, ConservesMassEveryStep) {
  for (int n : {1, 2, 3, 5}) {
    const RadialGrid g(n, 1.0, 80);
    State s = random_state(g, 9 + n);
    const double m0 = integrate(g, s.u);
    for (double dt : {1e-4, 1e-1, 10.0}) {
      const State next = step(g, kExp, s, dt);
      EXPECT_LE(std::abs(integrate(g, next.u) - integrate(g, s.u)), 1e-12 * m0) << "n=" << n << " dt=" << dt;
      s = next;
    }
  }
}

TEST(Step, StaysNonnegative) {
  for (unsigned seed = 0; seed < 30; ++seed) {
    const RadialGrid g(3, 1.0, 50);
    State s = random_state(g, seed);
    for (std::size_t i = 0; i < 50; i += 3) s.u[i] = 0.0;
    for (double dt : {1e-3, 1.0, 100.0}) {
      s = step(g, MotilitySpec::power_law(2.0), s, dt);
      EXPECT_GE(s.u.min(), 0.0);
      EXPECT_GE(s.v.min(), 0.0);
    }
  }
}

TEST(Step, AdvancesTime) {
  const RadialGrid g(1, 1.0, 16);
  State s{2.0, Field(16, 1.0), Field(16, 1.0)};
  EXPECT_DOUBLE_EQ(step(g, kExp, s, 0.25).t, 2.25);
}

TEST(Step, RejectsBadInput) {
  const RadialGrid g(1, 1.0, 16);
  State s{0.0, Field(16, 1.0), Field(16, 1.0)};
  EXPECT_THROW(step(g, kExp, s, 0.0), ConfigError);
  EXPECT_THROW(step(g, kExp, s, -1.0), ConfigError);
  State bad = s;
  bad.u[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(step(g, kExp, bad, 0.1), SolverFailure);
  bad = s;
  bad.u = Field(15, 1.0);
  EXPECT_THROW(step(g, kExp, bad, 0.1), ConfigError);
}

TEST(Step, TemporalSelfConvergenceIsFirstOrder) {
  const RadialGrid g(1, 1.0, 64);
  const State s0 = smooth_state(g);
  const double dt = 1e-2;
  const State a = integrate_fixed(g, kExp, s0, dt, 0.1);
  const State b = integrate_fixed(g, kExp, s0, dt / 2, 0.1);
  const State c = integrate_fixed(g, kExp, s0, dt / 4, 0.1);
  const double order = std::log2(sup_diff(a.u, b.u) / sup_diff(b.u, c.u));
  EXPECT_NEAR(order, 1.0, 0.2);
}

TEST(Step, ConvergesToTinyStepReference) {
  const RadialGrid g(1, 1.0, 64);
  const State s0 = smooth_state(g);
  const State ref = integrate_fixed(g, kExp, s0, 1e-5, 0.1);
  std::vector<double> errs;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) errs.push_back(sup_diff(integrate_fixed(g, kExp, s0, dt, 0.1).u, ref.u));
  EXPECT_NEAR(std::log2(errs[0] / errs[1]), 1.0, 0.2);
  EXPECT_NEAR(std::log2(errs[1] / errs[2]), 1.0, 0.2);
}

TEST(AdaptDt, SteadyStateGrowsByCap) {
  const StepControl ctl;
  const State s{0.0, Field{1.0, 2.0, 3.0, 4.0}, Field{1.0, 1.0, 1.0, 1.0}};
  EXPECT_DOUBLE_EQ(adapt_dt(s, s, 0.01, ctl), 0.01 * ctl.growth_cap);
}

TEST(AdaptDt, ChangeAtTargetGivesSafetyFactor) {
  const StepControl ctl;
  const State a{0.0, Field{1.0, 2.0, 3.0, 4.0}, Field{1.0, 1.0, 1.0, 1.0}};
  State b = a;
  b.u[3] = 4.0 * (1.0 + ctl.target_rel_change);
  EXPECT_NEAR(adapt_dt(a, b, 0.01, ctl), 0.01 * ctl.safety, 1e-15);
}

TEST(AdaptDt, DoublingShrinksStep) {
  const StepControl ctl;
  const State a{0.0, Field{1.0, 2.0, 3.0, 4.0}, Field{1.0, 1.0, 1.0, 1.0}};
  State b = a;
  for (auto& x : b.u) x *= 2.0;
  const double next = adapt_dt(a, b, 0.01, ctl);
  EXPECT_LT(next, 0.01);
  EXPECT_DOUBLE_EQ(next, 0.005);  // limited to a halving per step
}

TEST(AdaptDt, ClampedToBounds) {
  StepControl ctl;
  ctl.dt_max = 0.011;
  const State s{0.0, Field{1.0, 1.0, 1.0, 1.0}, Field{1.0, 1.0, 1.0, 1.0}};
  EXPECT_DOUBLE_EQ(adapt_dt(s, s, 0.01, ctl), 0.011);
}

TEST(SampleSchedule, LinearAndLogarithmic) {
  RunOptions lin;
  lin.t_end = 1.0;
  lin.sample_every = 0.25;
  const auto a = sample_schedule(lin);
  ASSERT_EQ(a.size(), 5u);
  EXPECT_DOUBLE_EQ(a[2], 0.5);
  EXPECT_DOUBLE_EQ(a.back(), 1.0);

  RunOptions lg;
  lg.t_end = 1000.0;
  lg.sample_every = 1.0;
  lg.samples_per_decade = 10;
  const auto b = sample_schedule(lg);
  ASSERT_EQ(b.size(), 32u);  // 0, 30 log points below 1000, and 1000
  EXPECT_EQ(b[0], 0.0);
  EXPECT_DOUBLE_EQ(b[1], 1.0);
  EXPECT_NEAR(b[11], 10.0, 1e-12);
  EXPECT_EQ(b.back(), 1000.0);
}

TEST(Run, ConstantDataStaysFlat) {
  const RadialGrid g(3, 1.0, 32);
  const State s{0.0, Field(32, 2.0), Field(32, 2.0)};
  RunOptions opt;
  opt.t_end = 10.0;
  opt.sample_every = 1.0;
  const auto res = run(g, kExp, s, StepControl{}, opt);
  EXPECT_EQ(res.status, RunStatus::ReachedTEnd);
  ASSERT_EQ(res.records.size(), 11u);
  for (std::size_t j = 0; j < res.records.size(); ++j) {
    EXPECT_DOUBLE_EQ(res.records[j].t, static_cast<double>(j));
    EXPECT_NEAR(res.records[j].mass, 2.0 * 4.0 * std::numbers::pi / 3.0, 1e-13);
    EXPECT_EQ(res.records[j].energy, res.records[0].energy);
  }
  EXPECT_EQ(res.final_state.t, 10.0);
}

TEST(Run, SnapshotsAtRequestedTimes) {
  const RadialGrid g(1, 1.0, 32);
  RunOptions opt;
  opt.t_end = 1.0;
  opt.sample_every = 0.5;
  opt.snapshot_times = {0.3, 0.0, 0.7, 5.0};
  const auto res = run(g, kExp, smooth_state(g), StepControl{}, opt);
  ASSERT_EQ(res.snapshots.size(), 3u);
  EXPECT_EQ(res.snapshots[0].t, 0.0);
  EXPECT_DOUBLE_EQ(res.snapshots[1].t, 0.3);
  EXPECT_DOUBLE_EQ(res.snapshots[2].t, 0.7);
}

TEST(Run, SmallMassRelaxesToHomogeneousState) {
  const RadialGrid g(3, 1.0, 64);
  const double m = 1.0;
  const State s0 = make_initial(g, ScenarioSpec::small_mass_bump(m, 0.5));
  RunOptions opt;
  opt.t_end = 100.0;
  opt.sample_every = 5.0;
  const auto res = run(g, kExp, s0, StepControl{}, opt);
  ASSERT_EQ(res.status, RunStatus::ReachedTEnd);
  const double mean = m / g.measure();
  EXPECT_LT(sup_diff(res.final_state.u, Field(64, mean)), 1e-3);
  // sup u - mean decreases along the recorded tail.
  for (std::size_t j = 2; j < res.records.size(); ++j) {
    EXPECT_LE(res.records[j].sup_u - mean, res.records[j - 1].sup_u - mean + 1e-15);
  }
}

TEST(Run, EnergyMonitorsOnBumpRuns) {
  for (int n : {1, 3}) {
    const RadialGrid g(n, 1.0, 64);
    RunOptions opt;
    opt.t_end = 2.0;
    opt.sample_every = 0.5;
    const auto res = run(g, kExp, make_initial(g, ScenarioSpec::negative_energy_bump(10.0, 0.25)), StepControl{}, opt);
    EXPECT_EQ(res.monitors.energy_violations, 0) << n;
    EXPECT_LE(res.monitors.total_mass_drift_rel, 1e-12);
    EXPECT_GE(res.monitors.min_u, 0.0);
    EXPECT_LE(res.monitors.max_growth_margin_rel, 1e-6);
  }
}

TEST(Run, SupNormGuardStops) {
  const RadialGrid g(3, 1.0, 64);
  const State s0 = make_initial(g, ScenarioSpec::negative_energy_bump(10.0, 0.25));
  RunOptions opt;
  opt.t_end = 10.0;
  opt.sample_every = 1.0;
  opt.sup_guard = 0.5 * s0.u.max();
  const auto res = run(g, kExp, s0, StepControl{}, opt);
  EXPECT_EQ(res.status, RunStatus::SupNormGuard);
  EXPECT_LT(res.final_state.t, 10.0);
  EXPECT_EQ(res.records.back().t, res.final_state.t);
}

TEST(Run, DtUnderflowStops) {
  const RadialGrid g(1, 1.0, 32);
  StepControl ctl;
  ctl.dt_min = ctl.dt_init = ctl.dt_max = 0.1;
  ctl.target_rel_change = 1e-8;
  RunOptions opt;
  opt.t_end = 10.0;
  opt.sample_every = 1.0;
  const auto res = run(g, kExp, smooth_state(g), ctl, opt);
  EXPECT_EQ(res.status, RunStatus::DtUnderflow);
}

TEST(Run, RejectsInvalidInitialData) {
  const RadialGrid g(1, 1.0, 16);
  RunOptions opt;
  State zero{0.0, Field(16, 0.0), Field(16, 1.0)};
  EXPECT_THROW(run(g, kExp, zero, StepControl{}, opt), ConfigError);
  State negative{0.0, Field(16, 1.0), Field(16, 1.0)};
  negative.v[2] = -1.0;
  EXPECT_THROW(run(g, kExp, negative, StepControl{}, opt), ConfigError);
}

TEST(Run, Deterministic) {
  const RadialGrid g(3, 1.0, 48);
  const State s0 = make_initial(g, ScenarioSpec::small_mass_bump(5.0, 0.3));
  RunOptions opt;
  opt.t_end = 1.0;
  opt.sample_every = 0.1;
  const auto a = run(g, kExp, s0, StepControl{}, opt);
  const auto b = run(g, kExp, s0, StepControl{}, opt);
  EXPECT_EQ(a.final_state.u, b.final_state.u);
  EXPECT_EQ(a.final_state.v, b.final_state.v);
  EXPECT_EQ(a.monitors.steps_accepted, b.monitors.steps_accepted);
}
