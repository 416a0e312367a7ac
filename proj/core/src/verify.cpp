#include "chemolab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "chemolab/diagnostics.hpp"
#include "chemolab/error.hpp"
#include "chemolab/motility.hpp"
#include "chemolab/scenarios.hpp"
#include "chemolab/stepper.hpp"

namespace chemolab {

namespace {

using Checks = std::vector<CheckResult>;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

class Recorder {
 public:
  Recorder(std::string suite, Checks& out) : suite_(std::move(suite)), out_(out) {}

  void add(std::string name, bool pass, std::string detail) {
    out_.push_back({suite_, std::move(name), pass, std::move(detail)});
  }

  // Runs `body`; any exception marks the check as failed instead of aborting the suite.
  template <class Body>
  void check(std::string name, Body&& body) {
    try {
      auto [pass, detail] = body();
      add(std::move(name), pass, std::move(detail));
    } catch (const std::exception& e) {
      add(std::move(name), false, std::string("threw: ") + e.what());
    }
  }

 private:
  std::string suite_;
  Checks& out_;
};

Field random_field(std::size_t m, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Field f(m);
  for (auto& x : f) x = dist(rng);
  return f;
}

double sup_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double observed_order(const std::vector<double>& errors) {
  // Average of the pairwise log2 ratios over successive halvings of h.
  double sum = 0.0;
  for (std::size_t j = 1; j < errors.size(); ++j) sum += std::log2(errors[j - 1] / errors[j]);
  return sum / static_cast<double>(errors.size() - 1);
}

// --- grid -------------------------------------------------------------------

void grid_suite(Checks& out, const VerifyOptions& opt) {
  Recorder rec("grid", out);
  const LaplacianOperator& lap = opt.laplacian;

  rec.check("cell volumes sum to ball volume", [] {
    double worst = 0.0;
    for (int n : {1, 2, 3, 5}) {
      const RadialGrid g(n, 1.7, 97);
      double s = 0.0;
      for (double w : g.cell_volumes()) s += w;
      worst = std::max(worst, std::abs(s - ball_volume(n, 1.7)) / ball_volume(n, 1.7));
    }
    return std::pair{worst <= 1e-12, "max rel error " + fmt(worst)};
  });

  rec.check("laplacian conservation", [&] {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int n : {1, 2, 3, 5}) {
      const RadialGrid g(n, 1.0, 64);
      const Field f = random_field(g.cells(), rng, 0.0, 1.0);
      const double scale = integrate(g, Field(g.cells(), 1.0)) * f.max_abs() / (g.spacing() * g.spacing());
      worst = std::max(worst, std::abs(integrate(g, lap(g, f))) / scale);
    }
    return std::pair{worst <= 1e-13, "max |int Lap f| (scaled) " + fmt(worst)};
  });

  rec.check("laplacian self-adjoint", [&] {
    std::mt19937_64 rng(12);
    double worst = 0.0;
    for (int n : {1, 3}) {
      const RadialGrid g(n, 1.0, 64);
      const Field f = random_field(g.cells(), rng, -1.0, 1.0);
      const Field h = random_field(g.cells(), rng, -1.0, 1.0);
      const double a = integrate(g, multiply(lap(g, f), h));
      const double b = integrate(g, multiply(f, lap(g, h)));
      worst = std::max(worst, std::abs(a - b) / (std::abs(a) + std::abs(b) + 1e-300));
    }
    return std::pair{worst <= 1e-12, "max rel asymmetry " + fmt(worst)};
  });

  rec.check("laplacian annihilates constants", [&] {
    const RadialGrid g(3, 1.0, 64);
    const double d = lap(g, Field(g.cells(), 2.5)).max_abs();
    return std::pair{d <= 1e-10, "sup |Lap c| " + fmt(d)};
  });

  rec.check("laplacian eigenfunction order", [&] {
    std::vector<double> errs;
    for (std::size_t m : {64u, 128u, 256u}) {
      const RadialGrid g(1, 1.0, m);
      Field f(m), exact(m);
      for (std::size_t i = 0; i < m; ++i) {
        f[i] = std::cos(std::numbers::pi * g.centers()[i]);
        exact[i] = -std::numbers::pi * std::numbers::pi * f[i];
      }
      errs.push_back(sup_diff(lap(g, f), exact));
    }
    const double p = observed_order(errs);
    return std::pair{std::abs(p - 2.0) <= 0.1, "order " + fmt(p)};
  });

  rec.check("helmholtz inverts I - Lap", [&] {
    std::mt19937_64 rng(13);
    double worst = 0.0;
    for (int n : {1, 3}) {
      const RadialGrid g(n, 1.0, 64);
      const Field f = random_field(g.cells(), rng, 0.0, 1.0);
      const Field w = helmholtz_solve(g, f);
      const Field lw = lap(g, w);
      Field back(g.cells());
      for (std::size_t i = 0; i < g.cells(); ++i) back[i] = w[i] - lw[i];
      worst = std::max(worst, sup_diff(back, f));
    }
    return std::pair{worst <= 1e-10, "sup residual " + fmt(worst)};
  });

  rec.check("helmholtz maximum principle", [] {
    std::mt19937_64 rng(14);
    bool ok = true;
    for (int n : {1, 3, 5}) {
      const RadialGrid g(n, 1.0, 80);
      const Field f = random_field(g.cells(), rng, 0.0, 3.0);
      const Field w = helmholtz_solve(g, f);
      ok = ok && w.min() >= f.min() * (1.0 - 1e-12) && w.max() <= f.max() * (1.0 + 1e-12);
    }
    return std::pair{ok, ok ? "min f <= w <= max f" : "bound violated"};
  });

  rec.check("helmholtz preserves integral", [] {
    std::mt19937_64 rng(15);
    const RadialGrid g(3, 1.0, 100);
    const Field f = random_field(g.cells(), rng, 0.0, 1.0);
    const double a = integrate(g, f);
    const double d = std::abs(integrate(g, helmholtz_solve(g, f)) - a) / a;
    return std::pair{d <= 1e-11, "rel diff " + fmt(d)};
  });

  rec.check("helmholtz eigenfunction order", [] {
    std::vector<double> errs;
    const double k2 = std::numbers::pi * std::numbers::pi;
    for (std::size_t m : {64u, 128u, 256u}) {
      const RadialGrid g(1, 1.0, m);
      Field u(m), exact(m);
      for (std::size_t i = 0; i < m; ++i) {
        const double c = std::cos(std::numbers::pi * g.centers()[i]);
        u[i] = (1.0 + k2) * c + 2.0;
        exact[i] = c + 2.0;
      }
      errs.push_back(sup_diff(helmholtz_solve(g, u), exact));
    }
    const double p = observed_order(errs);
    return std::pair{std::abs(p - 2.0) <= 0.1, "order " + fmt(p)};
  });
}

// --- motility ---------------------------------------------------------------

void motility_suite(Checks& out) {
  Recorder rec("motility", out);

  auto fd_check = [](const MotilitySpec& spec) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> dist(0.0, 50.0);
    double worst = 0.0;
    for (int j = 0; j < 1000; ++j) {
      const double s = dist(rng) + 1e-3;
      const double h = 1e-5 * std::max(1.0, s);
      const double fd = (spec.value(s + h) - spec.value(s - h)) / (2.0 * h);
      const double d = eval_gamma_prime(spec, s);
      worst = std::max(worst, std::abs(fd - d) / (std::abs(d) + 1e-300));
    }
    return std::pair{worst <= 1e-6, "max rel mismatch " + fmt(worst)};
  };
  rec.check("exponential derivative", [&] { return fd_check(MotilitySpec::exponential()); });
  rec.check("power-law derivative", [&] { return fd_check(MotilitySpec::power_law(2.5)); });

  rec.check("gamma maximal at zero", [] {
    bool ok = true;
    for (const auto& spec : {MotilitySpec::exponential(), MotilitySpec::power_law(1.0), MotilitySpec::power_law(4.0)}) {
      const double g0 = eval_gamma(spec, 0.0);
      for (int j = 1; j <= 200; ++j) ok = ok && eval_gamma(spec, 0.25 * j) <= g0;
    }
    return std::pair{ok, ok ? "gamma(s) <= gamma(0)" : "gamma exceeds gamma(0)"};
  });

  rec.check("built-in kinds validate", [] {
    // (1+s)^-1 decays too slowly to pass the vanishing test on [0, 50]; that is a warning only.
    const bool ok = validate_motility(MotilitySpec::exponential()).all_pass() &&
                    validate_motility(MotilitySpec::power_law(1.0)).structurally_valid() &&
                    validate_motility(MotilitySpec::power_law(3.0)).all_pass();
    return std::pair{ok, ok ? "exponential, power_law(1), power_law(3) accepted" : "built-in kind rejected"};
  });

  rec.check("increasing gamma rejected", [] {
    const auto spec = MotilitySpec::custom([](double s) { return 1.0 + s; }, [](double) { return 1.0; }, "1+s");
    const auto r = validate_motility(spec);
    return std::pair{!r.monotonicity && !r.structurally_valid(), "monotonicity flagged"};
  });

  rec.check("non-vanishing gamma warned", [] {
    const auto spec = MotilitySpec::custom([](double) { return 1.0; }, [](double) { return 0.0; }, "const");
    const auto r = validate_motility(spec);
    return std::pair{r.structurally_valid() && !r.vanishing, "vanishing flagged, still runnable"};
  });

  rec.check("negative exponent refused", [] {
    try {
      (void)MotilitySpec::power_law(-1.0);
    } catch (const ConfigError&) {
      return std::pair{true, std::string("ConfigError")};
    }
    return std::pair{false, std::string("accepted k = -1")};
  });
}

// --- stepper ----------------------------------------------------------------

void stepper_suite(Checks& out) {
  Recorder rec("stepper", out);
  const auto expo = MotilitySpec::exponential();

  rec.check("per-step mass conservation", [&] {
    double worst = 0.0;
    for (int n : {1, 3}) {
      const RadialGrid g(n, 1.0, 64);
      State s = make_initial(g, ScenarioSpec::small_mass_bump(5.0, 0.4));
      const double m0 = integrate(g, s.u);
      for (int k = 0; k < 50; ++k) {
        const State next = step(g, expo, s, 2e-3);
        worst = std::max(worst, std::abs(integrate(g, next.u) - integrate(g, s.u)) / m0);
        s = next;
      }
    }
    return std::pair{worst <= 1e-12, "max rel step drift " + fmt(worst)};
  });

  rec.check("positivity", [&] {
    const RadialGrid g(3, 1.0, 64);
    State s = make_initial(g, ScenarioSpec::negative_energy_bump(10.0, 0.125));
    double lo = s.u.min();
    for (int k = 0; k < 50; ++k) {
      s = step(g, expo, s, 0.1);
      lo = std::min({lo, s.u.min(), s.v.min()});
    }
    return std::pair{lo >= 0.0, "min over run " + fmt(lo)};
  });

  rec.check("constant states are fixed points", [&] {
    const RadialGrid g(3, 1.0, 48);
    double worst = 0.0;
    for (double c : {0.3, 1.0, 7.0}) {
      for (double dt : {1e-6, 1e-2, 1.0, 100.0}) {
        State s{0.0, Field(g.cells(), c), Field(g.cells(), c)};
        for (int k = 0; k < 100; ++k) s = step(g, expo, s, dt);
        worst = std::max({worst, sup_diff(s.u, Field(g.cells(), c)) / c, sup_diff(s.v, Field(g.cells(), c)) / c});
      }
    }
    return std::pair{worst <= 1e-14, "max rel deviation " + fmt(worst)};
  });

  rec.check("adapt_dt rule", [] {
    const StepControl ctl;
    const State a{0.0, Field{1.0, 2.0}, Field{1.0, 1.0}};
    const State doubled{0.0, Field{2.0, 4.0}, Field{1.0, 1.0}};
    State at_target = a;
    at_target.u[1] = 2.0 * (1.0 + ctl.target_rel_change);
    const double dt = 1e-2;
    const bool steady = std::abs(adapt_dt(a, a, dt, ctl) - dt * ctl.growth_cap) <= 1e-15;
    const bool target = std::abs(adapt_dt(a, at_target, dt, ctl) - dt * ctl.safety) <= 1e-12 * dt;
    const bool shrink = adapt_dt(a, doubled, dt, ctl) < dt;
    return std::pair{steady && target && shrink, "steady/target/doubling cases"};
  });

  rec.check("run reaches end on constant data", [&] {
    const RadialGrid g(3, 1.0, 32);
    State s{0.0, Field(g.cells(), 1.0), Field(g.cells(), 1.0)};
    RunOptions opt;
    opt.t_end = 10.0;
    opt.sample_every = 1.0;
    const auto res = run(g, expo, s, StepControl{}, opt);
    bool flat = true;
    for (const auto& r : res.records) flat = flat && r.mass == res.records.front().mass && r.energy == res.records.front().energy;
    return std::pair{res.status == RunStatus::ReachedTEnd && flat && res.records.size() == 11,
                     std::string(to_string(res.status)) + ", " + std::to_string(res.records.size()) + " records"};
  });
}

// --- diagnostics ------------------------------------------------------------

void diagnostics_suite(Checks& out) {
  Recorder rec("diagnostics", out);
  const auto expo = MotilitySpec::exponential();

  rec.check("energy monotone on bump runs", [&] {
    long violations = 0;
    double worst = 0.0;
    for (int n : {1, 3}) {
      const RadialGrid g(n, 1.0, 64);
      RunOptions opt;
      opt.t_end = 2.0;
      opt.sample_every = 0.5;
      const auto res = run(g, expo, make_initial(g, ScenarioSpec::negative_energy_bump(10.0, 0.25)), StepControl{}, opt);
      violations += res.monitors.energy_violations;
      worst = std::max(worst, res.monitors.max_energy_increase_rel);
    }
    return std::pair{violations == 0, "max rel increase " + fmt(worst)};
  });

  rec.check("w nonnegative and growth bound", [&] {
    const RadialGrid g(3, 1.0, 64);
    RunOptions opt;
    opt.t_end = 2.0;
    opt.sample_every = 0.5;
    const auto res = run(g, expo, make_initial(g, ScenarioSpec::small_mass_bump(3.0, 0.5)), StepControl{}, opt);
    const bool ok = res.monitors.min_w >= 0.0 && res.monitors.max_growth_margin_rel <= 1e-6;
    return std::pair{ok, "min w " + fmt(res.monitors.min_w) + ", margin/sup w0 " + fmt(res.monitors.max_growth_margin_rel)};
  });

  rec.check("w identity exact on constants", [&] {
    const RadialGrid g(2, 1.0, 40);
    const State s{0.0, Field(g.cells(), 1.5), Field(g.cells(), 1.5)};
    State next = s;
    next.t = 0.1;
    const double r = w_identity_residual(g, expo, s, next, 0.1);
    return std::pair{r == 0.0, "residual " + fmt(r)};
  });

  rec.check("dissipation vanishes at u = e^v", [&] {
    const RadialGrid g(1, 1.0, 64);
    State s{0.0, Field(g.cells()), Field(g.cells())};
    for (std::size_t i = 0; i < g.cells(); ++i) {
      s.v[i] = 1.0 + 0.5 * std::cos(std::numbers::pi * g.centers()[i]);
      s.u[i] = std::exp(s.v[i]);
    }
    const double d = dissipation(g, expo, s).value_or(-1.0);
    return std::pair{std::abs(d) <= 1e-12, "D = " + fmt(d)};
  });

  struct Synthetic {
    const char* name;
    BlowupLabel expected;
    std::vector<double> t, y;
  };
  auto synthetic = [] {
    std::vector<Synthetic> cases;
    Synthetic bounded{"5 + exp(-t)", BlowupLabel::Bounded, {}, {}};
    Synthetic growth{"exp(0.3 t)", BlowupLabel::InfiniteTimeGrowth, {}, {}};
    Synthetic finite{"(1 - t/2)^-1", BlowupLabel::FiniteTimeLike, {}, {}};
    for (int j = 0; j < 60; ++j) {
      const double t = 0.1 * std::pow(10.0, 3.0 * j / 59.0);
      bounded.t.push_back(t);
      bounded.y.push_back(5.0 + std::exp(-t));
    }
    for (int j = 0; j < 60; ++j) {
      const double t = 0.5 * std::pow(10.0, 2.0 * j / 59.0);
      growth.t.push_back(t);
      growth.y.push_back(std::exp(0.3 * t));
    }
    for (int j = 0; j < 100; ++j) {
      const double t = 1.8 * j / 99.0;
      finite.t.push_back(t);
      finite.y.push_back(1.0 / (1.0 - t / 2.0));
    }
    cases.push_back(bounded);
    cases.push_back(growth);
    cases.push_back(finite);
    return cases;
  }();

  for (const auto& c : synthetic) {
    rec.check(std::string("classify ") + c.name, [&] {
      const auto r = classify_blowup(c.t, c.y);
      bool ok = r.label == c.expected;
      std::string detail = std::string(to_string(r.label));
      if (c.expected == BlowupLabel::FiniteTimeLike) {
        ok = ok && std::abs(r.t_star - 2.0) <= 0.1;
        detail += ", T* " + fmt(r.t_star);
      }
      return std::pair{ok, detail};
    });
  }

  rec.check("classify invariant under rescaling", [&] {
    bool ok = true;
    for (const auto& c : synthetic) {
      std::vector<double> t2(c.t.size()), y2(c.y.size());
      for (std::size_t i = 0; i < c.t.size(); ++i) {
        t2[i] = 3.0 * c.t[i] + 2.0;
        y2[i] = 17.0 * c.y[i];
      }
      ok = ok && classify_blowup(t2, y2).label == classify_blowup(c.t, c.y).label;
    }
    return std::pair{ok, ok ? "labels unchanged" : "label changed"};
  });
}

// --- scenarios --------------------------------------------------------------

void scenarios_suite(Checks& out) {
  Recorder rec("scenarios", out);

  rec.check("mass accuracy", [] {
    double worst = 0.0;
    for (int n : {1, 3, 4}) {
      const RadialGrid g(n, 1.0, 128);
      for (const auto& spec : {ScenarioSpec::small_mass_bump(2.0, 0.5), ScenarioSpec::negative_energy_bump(50.0, 1.0 / 16)}) {
        const State s = make_initial(g, spec);
        worst = std::max(worst, std::abs(integrate(g, s.u) - spec.mass) / spec.mass);
      }
    }
    return std::pair{worst <= 1e-10, "max rel error " + fmt(worst)};
  });

  rec.check("constant state report", [] {
    const RadialGrid g(3, 1.0, 200);
    const auto rep = energy_report(g, make_initial(g, ScenarioSpec::constant(1.0)));
    const double vol = 4.0 * std::numbers::pi / 3.0;
    const double d = std::max(std::abs(rep.mass - vol), std::abs(rep.energy + 2.0 * std::numbers::pi / 3.0));
    return std::pair{d <= 1e-12, "mass/F error " + fmt(d)};
  });

  rec.check("energy decreases with concentration", [] {
    const RadialGrid g(3, 1.0, 256);
    std::vector<double> f;
    for (double eps : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
      f.push_back(energy_report(g, make_initial(g, ScenarioSpec::negative_energy_bump(50.0, eps))).energy);
    }
    const bool ok = f[1] < f[0] && f[2] < f[1] && f[1] < 0.0;
    return std::pair{ok, "F0 = " + fmt(f[0]) + ", " + fmt(f[1]) + ", " + fmt(f[2])};
  });

  rec.check("zero boundary flux of profiles", [] {
    double worst = 0.0;
    for (int n : {1, 3}) {
      const RadialGrid g(n, 1.0, 96);
      for (const auto& spec : {ScenarioSpec::small_mass_bump(2.0, 0.5), ScenarioSpec::negative_energy_bump(10.0, 0.2)}) {
        const State s = make_initial(g, spec);
        for (const Field* f : {&s.u, &s.v}) {
          const double scale = f->max_abs() * integrate(g, Field(g.cells(), 1.0));
          worst = std::max(worst, std::abs(integrate(g, apply_laplacian(g, *f))) / scale);
        }
      }
    }
    return std::pair{worst <= 1e-12, "max scaled net flux " + fmt(worst)};
  });

  rec.check("invalid parameters refused", [] {
    const RadialGrid g(3, 1.0, 64);
    int refused = 0;
    for (const auto& spec : {ScenarioSpec::negative_energy_bump(-1.0, 0.1), ScenarioSpec::negative_energy_bump(1.0, 0.5),
                             ScenarioSpec::small_mass_bump(0.0, 0.5)}) {
      try {
        (void)make_initial(g, spec);
      } catch (const ConfigError&) {
        ++refused;
      }
    }
    return std::pair{refused == 3, std::to_string(refused) + "/3 refused"};
  });
}

}  // namespace

LaplacianOperator leaky_boundary_laplacian(double leak) {
  return [leak](const RadialGrid& grid, const Field& f) {
    Field out = apply_laplacian(grid, f);
    const std::size_t last = grid.cells() - 1;
    const double area = grid.face_areas()[grid.cells()];
    out[last] -= leak * area * f[last] / (grid.spacing() * grid.cell_volumes()[last]);
    return out;
  };
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = {"grid", "motility", "stepper", "diagnostics", "scenarios"};
  return names;
}

std::vector<CheckResult> run_verify(std::string_view suite, const VerifyOptions& options) {
  const auto& names = verify_suites();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw ConfigError("verify: unknown suite '" + std::string(suite) + "'");
  }
  Checks out;
  auto want = [&](std::string_view name) { return suite == "all" || suite == name; };
  if (want("grid")) grid_suite(out, options);
  if (want("motility")) motility_suite(out);
  if (want("stepper")) stepper_suite(out);
  if (want("diagnostics")) diagnostics_suite(out);
  if (want("scenarios")) scenarios_suite(out);
  return out;
}

void print_check_table(std::ostream& out, const std::vector<CheckResult>& results) {
  std::size_t width = 5;
  for (const auto& r : results) width = std::max(width, r.suite.size() + r.name.size() + 1);
  int failed = 0;
  for (const auto& r : results) {
    const std::string id = r.suite + "/" + r.name;
    out << (r.pass ? "PASS  " : "FAIL  ") << id << std::string(width - id.size() + 2, ' ') << r.detail << '\n';
    if (!r.pass) ++failed;
  }
  out << results.size() - failed << "/" << results.size() << " checks passed\n";
}

}  // namespace chemolab
