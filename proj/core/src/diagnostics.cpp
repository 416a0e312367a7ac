#include "chemolab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "chemolab/error.hpp"

namespace chemolab {

EnergyTerms lyapunov_terms(const RadialGrid& grid, const State& state) {
  grid.check_field(state.u);
  grid.check_field(state.v);
  const std::size_t m = grid.cells();
  Field entropy(m), interaction(m), square(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = state.u[i];
    const double v = state.v[i];
    entropy[i] = u > 0.0 ? u * std::log(std::max(u, kLogFloor)) : 0.0;
    interaction[i] = u * v;
    square[i] = v * v;
  }
  EnergyTerms terms;
  terms.entropy = integrate(grid, entropy);
  terms.interaction = integrate(grid, interaction);
  terms.quadratic = 0.5 * integrate(grid, square);
  terms.gradient = gradient_squared_integral(grid, state.v);
  return terms;
}

double lyapunov(const RadialGrid& grid, const State& state, double gradient_weight) {
  return lyapunov_terms(grid, state).total(gradient_weight);
}

std::optional<double> dissipation(const RadialGrid& grid, const MotilitySpec& spec, const State& state) {
  if (!spec.is_exponential()) return std::nullopt;
  grid.check_field(state.u);
  grid.check_field(state.v);
  const auto k = grid.face_conductances();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < grid.cells(); ++i) {
    const double ul = state.u[i], ur = state.u[i + 1];
    if (ul < kLogFloor || ur < kLogFloor) continue;
    const double vl = state.v[i], vr = state.v[i + 1];
    const double jump = (std::log(ur) - std::log(ul)) - (vr - vl);
    sum += k[i] * 0.5 * (ul + ur) * std::exp(-0.5 * (vl + vr)) * jump * jump;
  }
  return sum;
}

Field aux_w(const RadialGrid& grid, const State& state) { return helmholtz_solve(grid, state.u); }

namespace {

Field frozen_flux_density(const MotilitySpec& spec, const Field& v, const Field& u) {
  Field g(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) g[i] = eval_gamma(spec, v[i]) * u[i];
  return g;
}

void require_positive_dt(double dt) {
  if (!(dt > 0.0)) throw ConfigError("diagnostics: dt must be positive");
}

}  // namespace

double w_identity_residual(const RadialGrid& grid, const MotilitySpec& spec, const State& prev, const State& next,
                           double dt, ULevel level) {
  require_positive_dt(dt);
  const Field w_prev = aux_w(grid, prev);
  const Field w_next = aux_w(grid, next);
  const Field g = frozen_flux_density(spec, prev.v, prev.u);
  const Field smoothed = helmholtz_solve(grid, g);
  const Field& u_mid = level == ULevel::Next ? next.u : prev.u;

  double res = 0.0;
  for (std::size_t i = 0; i < grid.cells(); ++i) {
    const double r = (w_next[i] - w_prev[i]) / dt + eval_gamma(spec, prev.v[i]) * u_mid[i] - smoothed[i];
    res = std::max(res, std::abs(r));
  }
  return res;
}

Field pointwise_laplacian(const RadialGrid& grid, const Field& f) {
  grid.check_field(f);
  const std::size_t m = grid.cells();
  const double h = grid.spacing();
  const auto r = grid.centers();
  const double curvature = grid.dimension() - 1.0;
  // Even reflection about the faces r = 0 and r = R.
  const auto at = [&](long j) {
    if (j < 0) j = -j - 1;
    if (j >= static_cast<long>(m)) j = 2 * static_cast<long>(m) - j - 1;
    return f[static_cast<std::size_t>(j)];
  };
  Field out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const long j = static_cast<long>(i);
    const double fm2 = at(j - 2), fm1 = at(j - 1), fp1 = at(j + 1), fp2 = at(j + 2);
    const double second = (-fm2 + 16.0 * fm1 - 30.0 * f[i] + 16.0 * fp1 - fp2) / (12.0 * h * h);
    const double first = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    out[i] = second + curvature / r[i] * first;
  }
  return out;
}

double reformulation_residual(const RadialGrid& grid, const MotilitySpec& spec, const State& prev,
                              const State& next, double dt) {
  require_positive_dt(dt);
  const Field w_prev = aux_w(grid, prev);
  const Field w_next = aux_w(grid, next);
  const Field lap = pointwise_laplacian(grid, w_next);
  const Field smoothed = helmholtz_solve(grid, frozen_flux_density(spec, prev.v, prev.u));

  double res = 0.0;
  for (std::size_t i = 0; i < grid.cells(); ++i) {
    const double gamma = eval_gamma(spec, prev.v[i]);
    const double r = (w_next[i] - w_prev[i]) / dt - gamma * (lap[i] - w_next[i]) - smoothed[i];
    res = std::max(res, std::abs(r));
  }
  return res;
}

double z_identity_residual(const RadialGrid& grid, const State& prev, const State& next, double dt) {
  require_positive_dt(dt);
  const Field z_prev = helmholtz_solve(grid, prev.v);
  const Field z_next = helmholtz_solve(grid, next.v);
  const Field w_next = helmholtz_solve(grid, next.u);
  const Field lap = apply_laplacian(grid, z_next);
  double res = 0.0;
  for (std::size_t i = 0; i < grid.cells(); ++i) {
    const double r = (z_next[i] - z_prev[i]) / dt - (lap[i] - z_next[i] + w_next[i]);
    res = std::max(res, std::abs(r));
  }
  return res;
}

double w_growth_margin(const RadialGrid& grid, const State& state, const Field& w0, double gamma0) {
  grid.check_field(w0);
  const double factor = std::exp(gamma0 * state.t);
  if (!std::isfinite(factor)) return std::numeric_limits<double>::lowest();
  const Field w = aux_w(grid, state);
  double margin = std::numeric_limits<double>::lowest();
  for (std::size_t i = 0; i < grid.cells(); ++i) margin = std::max(margin, w[i] - w0[i] * factor);
  return margin;
}

double vw_ratio(const RadialGrid& grid, const State& state) {
  const Field w = aux_w(grid, state);
  double ratio = 0.0;
  for (std::size_t i = 0; i < grid.cells(); ++i) ratio = std::max(ratio, state.v[i] / (w[i] + 1.0));
  return ratio;
}

DiagnosticsRecord make_record(const RadialGrid& grid, const MotilitySpec& spec, const State& state,
                              const Field& w0, double dt_used, double w_residual) {
  DiagnosticsRecord rec;
  rec.t = state.t;
  rec.dt_used = dt_used;
  rec.mass = integrate(grid, state.u);
  rec.energy = lyapunov(grid, state);
  rec.dissipation = dissipation(grid, spec, state);
  rec.w_identity_residual = w_residual;
  rec.w_growth_margin = w_growth_margin(grid, state, w0, eval_gamma(spec, 0.0));
  rec.vw_ratio = vw_ratio(grid, state);
  rec.sup_u = state.u.max();
  rec.sup_v = state.v.max();
  rec.min_u = state.u.min();
  return rec;
}

// --- blow-up classification -------------------------------------------------

std::string_view to_string(BlowupLabel label) {
  switch (label) {
    case BlowupLabel::Bounded:
      return "Bounded";
    case BlowupLabel::InfiniteTimeGrowth:
      return "InfiniteTimeGrowth";
    case BlowupLabel::FiniteTimeLike:
      return "FiniteTimeLike";
  }
  return "Unknown";
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit fit;
  if (sxx <= 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // A constant series is fitted perfectly by any horizontal line.
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

struct SingularFit {
  double r2 = -1.0;
  double exponent = 0.0;
  double t_star = 0.0;
  bool interior = false;
};

// Fits log y = c - p log(T* - t) over the tail, scanning the gap T* - t_last
// on a log grid up to the horizon limit and refining by golden section.
SingularFit fit_singular(std::span<const double> t, std::span<const double> logy, double t_last, double gap_max) {
  std::vector<double> x(t.size());
  auto evaluate = [&](double gap) {
    const double t_star = t_last + gap;
    for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::log(t_star - t[i]);
    return fit_line(x, logy);
  };
  auto score = [](const LineFit& f) { return f.slope < 0.0 ? f.r2 : -1.0; };

  constexpr int kGrid = 240;
  const double lo = std::log(gap_max * 1e-7), hi = std::log(gap_max);
  int best = 0;
  double best_score = -2.0;
  for (int j = 0; j <= kGrid; ++j) {
    const double s = score(evaluate(std::exp(lo + (hi - lo) * j / kGrid)));
    if (s > best_score) {
      best_score = s;
      best = j;
    }
  }

  SingularFit out;
  out.interior = best < kGrid;
  double a = lo + (hi - lo) * std::max(best - 1, 0) / kGrid;
  double b = lo + (hi - lo) * std::min(best + 1, kGrid) / kGrid;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (score(evaluate(std::exp(c))) >= score(evaluate(std::exp(d)))) {
      b = d;
    } else {
      a = c;
    }
  }
  const double gap = std::exp(0.5 * (a + b));
  const LineFit fit = evaluate(gap);
  out.r2 = score(fit);
  out.exponent = -fit.slope;
  out.t_star = t_last + gap;
  return out;
}

}  // namespace

BlowupClassification classify_blowup(std::span<const double> times, std::span<const double> sup_u,
                                     const ClassifierThresholds& thresholds) {
  if (times.size() != sup_u.size()) throw ConfigError("classify_blowup: series length mismatch");
  if (times.size() < 20) throw ConfigError("classify_blowup: need at least 20 samples");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !(sup_u[i] > 0.0) || !std::isfinite(sup_u[i])) {
      throw ConfigError("classify_blowup: samples must be finite with positive sup_u");
    }
    if (i > 0 && !(times[i] > times[i - 1])) throw ConfigError("classify_blowup: times must increase strictly");
  }

  const std::size_t n = times.size();
  const std::size_t first = n / 2;
  const auto t = times.subspan(first);
  const auto y = sup_u.subspan(first);
  std::vector<double> logy(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) logy[i] = std::log(y[i]);

  BlowupClassification out;
  out.tail_samples = t.size();

  const double horizon = times.back() - times.front();
  const SingularFit singular = fit_singular(t, logy, times.back(), (thresholds.horizon_factor - 1.0) * horizon);
  out.r2_singular = std::max(singular.r2, 0.0);
  out.t_star = singular.t_star;
  out.singular_exponent = singular.exponent;
  out.t_star_interior = singular.interior;

  const double peak = *std::max_element(y.begin(), y.end());
  const double growth = std::max(peak / y.front(), 1.0);
  const double decades = t.front() > 0.0 ? std::log10(t.back() / t.front()) : 1.0;
  out.growth_per_decade = std::pow(growth, 1.0 / decades) - 1.0;

  const LineFit semilog = fit_line(t, logy);
  out.r2_semilog = semilog.r2;
  LineFit loglog;
  {
    std::vector<double> lt, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] > 0.0) {
        lt.push_back(std::log(t[i]));
        ly.push_back(logy[i]);
      }
    }
    if (lt.size() >= 3) loglog = fit_line(lt, ly);
  }
  out.r2_loglog = loglog.r2;
  const LineFit& growth_fit = loglog.r2 >= semilog.r2 ? loglog : semilog;
  out.growth_slope = growth_fit.slope;
  const double r2_growth = growth_fit.slope > 0.0 ? growth_fit.r2 : 0.0;

  const bool singular_ok = singular.interior && singular.r2 >= thresholds.min_r2;
  if (singular_ok) {
    out.label = BlowupLabel::FiniteTimeLike;
  } else if (out.growth_per_decade < thresholds.bounded_growth_per_decade) {
    out.label = BlowupLabel::Bounded;
  } else if (r2_growth >= thresholds.min_r2) {
    out.label = BlowupLabel::InfiniteTimeGrowth;
  } else {
    out.ambiguous = true;
    const double r2_finite = singular.interior ? out.r2_singular : 0.0;
    if (r2_finite <= 0.0 && r2_growth <= 0.0) {
      out.label = BlowupLabel::Bounded;
    } else {
      out.label = r2_finite > r2_growth ? BlowupLabel::FiniteTimeLike : BlowupLabel::InfiniteTimeGrowth;
    }
  }
  return out;
}

}  // namespace chemolab
