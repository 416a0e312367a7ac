#include "chemolab/motility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chemolab/error.hpp"

namespace chemolab {

MotilitySpec MotilitySpec::exponential() { return MotilitySpec(MotilityKind::Exponential, 0.0, "exponential"); }

MotilitySpec MotilitySpec::power_law(double exponent) {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    std::ostringstream os;
    os << "motility: power-law exponent must be positive, got " << exponent;
    throw ConfigError(os.str());
  }
  return MotilitySpec(MotilityKind::PowerLaw, exponent, "power_law");
}

MotilitySpec MotilitySpec::custom(Evaluator gamma, Evaluator derivative, std::string label) {
  if (!gamma || !derivative) throw ConfigError("motility: custom spec needs both gamma and gamma'");
  MotilitySpec spec(MotilityKind::Custom, 0.0, std::move(label));
  spec.gamma_ = std::move(gamma);
  spec.derivative_ = std::move(derivative);
  return spec;
}

double MotilitySpec::value(double s) const {
  switch (kind_) {
    case MotilityKind::Exponential:
      return std::exp(-s);
    case MotilityKind::PowerLaw:
      return std::pow(1.0 + s, -exponent_);
    case MotilityKind::Custom:
      return gamma_(s);
  }
  throw InternalError("motility: unknown kind");
}

double MotilitySpec::derivative(double s) const {
  switch (kind_) {
    case MotilityKind::Exponential:
      return -std::exp(-s);
    case MotilityKind::PowerLaw:
      return -exponent_ * std::pow(1.0 + s, -exponent_ - 1.0);
    case MotilityKind::Custom:
      return derivative_(s);
  }
  throw InternalError("motility: unknown kind");
}

namespace {

void require_nonnegative(double s) {
  if (!(s >= 0.0)) {
    std::ostringstream os;
    os << "motility: argument must be nonnegative, got " << s;
    throw ConfigError(os.str());
  }
}

}  // namespace

double eval_gamma(const MotilitySpec& spec, double s) {
  require_nonnegative(s);
  const double g = spec.value(s);
  // exp(-s) underflows to 0 for s > ~745; that is a representability limit,
  // not a violation of gamma > 0.
  if (!std::isfinite(g) || g < 0.0 || (g == 0.0 && spec.kind() == MotilityKind::Custom)) {
    std::ostringstream os;
    os << "motility: gamma(" << s << ") = " << g << " is not positive and finite";
    throw InternalError(os.str());
  }
  return g;
}

double eval_gamma_prime(const MotilitySpec& spec, double s) {
  require_nonnegative(s);
  return spec.derivative(s);
}

ValidationReport validate_motility(const MotilitySpec& spec, double s_max, int samples, double vanish_tol) {
  ValidationReport report;
  report.s_max = s_max;
  report.vanish_tol = vanish_tol;
  if (!(s_max > 0.0) || samples < 100) {
    report.positivity = report.monotonicity = report.vanishing = false;
    report.messages.emplace_back("validation needs s_max > 0 and at least 100 samples");
    return report;
  }

  for (int j = 0; j < samples; ++j) {
    const double s = s_max * j / (samples - 1);
    const double g = spec.value(s);
    const double dg = spec.derivative(s);

    if (!(g > 0.0) || !std::isfinite(g)) {
      if (report.positivity) {
        std::ostringstream os;
        os << "positivity fails: gamma(" << s << ") = " << g;
        report.messages.push_back(os.str());
      }
      report.positivity = false;
    }
    if (!(dg <= 0.0)) {
      if (report.monotonicity) {
        std::ostringstream os;
        os << "monotonicity fails: gamma'(" << s << ") = " << dg << " > 0";
        report.messages.push_back(os.str());
      }
      report.monotonicity = false;
    }

    // Fourth-order central stencil; one-sided second order near s = 0 keeps the argument in range.
    const double step = 1e-3 * std::max(1.0, s);
    double fd;
    if (s >= 2.0 * step) {
      fd = (-spec.value(s + 2.0 * step) + 8.0 * spec.value(s + step) - 8.0 * spec.value(s - step) +
            spec.value(s - 2.0 * step)) /
           (12.0 * step);
    } else {
      const double hs = 1e-5;
      fd = (-3.0 * g + 4.0 * spec.value(s + hs) - spec.value(s + 2.0 * hs)) / (2.0 * hs);
    }
    const double scale = std::abs(dg) + 1e-6 * std::abs(g) + 1e-300;
    const double mismatch = std::abs(dg - fd) / scale;
    report.max_derivative_mismatch = std::max(report.max_derivative_mismatch, mismatch);
  }

  if (report.max_derivative_mismatch > 1e-3) {
    std::ostringstream os;
    os << "derivative cross-check fails: relative mismatch " << report.max_derivative_mismatch;
    report.messages.push_back(os.str());
    report.monotonicity = false;
  }

  report.gamma_at_s_max = spec.value(s_max);
  if (!(report.gamma_at_s_max < vanish_tol)) {
    std::ostringstream os;
    os << "vanishing check (warning): gamma(" << s_max << ") = " << report.gamma_at_s_max << " >= " << vanish_tol;
    report.messages.push_back(os.str());
    report.vanishing = false;
  }
  return report;
}

}  // namespace chemolab
