#pragma once

#include <functional>
#include <string>
#include <vector>

namespace chemolab {

enum class MotilityKind { Exponential, PowerLaw, Custom };

/// Signal-dependent motility gamma(s) together with its derivative.
///
/// Exponential: gamma(s) = exp(-s).
/// PowerLaw:    gamma(s) = (1 + s)^(-k), k > 0.
/// Custom:      caller-supplied evaluator pair (gamma, gamma').
class MotilitySpec {
 public:
  using Evaluator = std::function<double(double)>;

  static MotilitySpec exponential();
  /// Throws ConfigError unless k > 0.
  static MotilitySpec power_law(double exponent);
  static MotilitySpec custom(Evaluator gamma, Evaluator derivative, std::string label = "custom");

  MotilityKind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }
  const std::string& label() const noexcept { return label_; }
  bool is_exponential() const noexcept { return kind_ == MotilityKind::Exponential; }

  /// Unchecked evaluation; s is assumed nonnegative.
  double value(double s) const;
  double derivative(double s) const;

 private:
  MotilitySpec(MotilityKind kind, double exponent, std::string label) noexcept
      : kind_(kind), exponent_(exponent), label_(std::move(label)) {}

  MotilityKind kind_;
  double exponent_;
  std::string label_;
  Evaluator gamma_;
  Evaluator derivative_;
};

/// gamma(s). Throws ConfigError for s < 0 (the signal is nonnegative) and
/// InternalError if the evaluator returns a non-positive or non-finite value.
double eval_gamma(const MotilitySpec& spec, double s);
double eval_gamma_prime(const MotilitySpec& spec, double s);

struct ValidationReport {
  bool positivity = true;
  bool monotonicity = true;
  bool vanishing = true;
  double s_max = 50.0;
  double vanish_tol = 1e-3;
  double gamma_at_s_max = 0.0;
  double max_derivative_mismatch = 0.0;
  std::vector<std::string> messages;

  /// gamma > 0 and gamma' <= 0; a run is refused otherwise.
  bool structurally_valid() const noexcept { return positivity && monotonicity; }
  /// Vanishing failure is a warning only.
  bool all_pass() const noexcept { return positivity && monotonicity && vanishing; }
};

/// Dense sampling of gamma and gamma' on [0, s_max] (samples >= 100).
ValidationReport validate_motility(const MotilitySpec& spec, double s_max = 50.0, int samples = 1000,
                                   double vanish_tol = 1e-3);

}  // namespace chemolab
