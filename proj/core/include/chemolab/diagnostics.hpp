#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "chemolab/grid.hpp"
#include "chemolab/motility.hpp"
#include "chemolab/state.hpp"

namespace chemolab {

/// One row of series.csv.
struct DiagnosticsRecord {
  double t = 0.0;
  double dt_used = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  std::optional<double> dissipation;  // exponential motility only
  double w_identity_residual = 0.0;
  double w_growth_margin = 0.0;
  double vw_ratio = 0.0;
  double sup_u = 0.0;
  double sup_v = 0.0;
  double min_u = 0.0;
};

/// Floor applied inside logarithms; 0 log 0 is taken as 0.
inline constexpr double kLogFloor = 1e-300;

/// Weight on int |grad v|^2 for which F is non-increasing along solutions
/// (Keller-Segel normalization). The literal form carries weight 1; both are
/// reported, see lyapunov_terms.
inline constexpr double kLyapunovGradientWeight = 0.5;
inline constexpr double kLiteralGradientWeight = 1.0;

/// Separate terms of the Lyapunov functional.
struct EnergyTerms {
  double entropy = 0.0;      // int u log u
  double interaction = 0.0;  // int u v
  double quadratic = 0.0;    // 1/2 int v^2
  double gradient = 0.0;     // int |grad v|^2

  double total(double gradient_weight = kLyapunovGradientWeight) const noexcept {
    return entropy - interaction + quadratic + gradient_weight * gradient;
  }
};

EnergyTerms lyapunov_terms(const RadialGrid& grid, const State& state);

/// F(u, v) = int u log u - int u v + 1/2 int v^2 + c int |grad v|^2.
double lyapunov(const RadialGrid& grid, const State& state, double gradient_weight = kLyapunovGradientWeight);

/// int u e^{-v} |grad(log u - v)|^2 by face quadrature with arithmetic face
/// means. Returns nullopt for non-exponential motility.
std::optional<double> dissipation(const RadialGrid& grid, const MotilitySpec& spec, const State& state);

/// w = (I - Delta_h)^{-1} u.
Field aux_w(const RadialGrid& grid, const State& state);

/// Which time level stands in for u in gamma(v^k) u within the w identity.
enum class ULevel { Next, Prev };

/// sup-norm residual of w_t + gamma(v) u = (I - Delta)^{-1}[gamma(v) u] over
/// one accepted step, with gamma frozen at the earlier state.
double w_identity_residual(const RadialGrid& grid, const MotilitySpec& spec, const State& prev, const State& next,
                           double dt, ULevel level = ULevel::Next);

/// Fourth-order pointwise radial Laplacian f'' + (n-1)/r f' at cell centres,
/// with even reflection at r = 0 and r = R. Independent of apply_laplacian and
/// used as the reference operator in reformulation_residual.
Field pointwise_laplacian(const RadialGrid& grid, const Field& f);

/// sup-norm residual of w_t - gamma(v)(Delta w - w) = (I - Delta)^{-1}[gamma(v) u]
/// with Delta w taken from pointwise_laplacian. What remains is the O(dt)
/// frozen-level term plus the O(h^2) truncation error of apply_laplacian.
double reformulation_residual(const RadialGrid& grid, const MotilitySpec& spec, const State& prev,
                              const State& next, double dt);

/// sup-norm residual of z_t = Delta z - z + w with z = (I - Delta_h)^{-1} v.
double z_identity_residual(const RadialGrid& grid, const State& prev, const State& next, double dt);

/// sup_i [w_i(t) - w0_i e^{gamma0 t}]. Returns the lowest double when the
/// exponential overflows.
double w_growth_margin(const RadialGrid& grid, const State& state, const Field& w0, double gamma0);

/// sup_i v_i / (w_i + 1).
double vw_ratio(const RadialGrid& grid, const State& state);

DiagnosticsRecord make_record(const RadialGrid& grid, const MotilitySpec& spec, const State& state,
                              const Field& w0, double dt_used, double w_residual);

// --- blow-up classification -------------------------------------------------

enum class BlowupLabel { Bounded, InfiniteTimeGrowth, FiniteTimeLike };
std::string_view to_string(BlowupLabel label);

struct ClassifierThresholds {
  double bounded_growth_per_decade = 0.01;
  double min_r2 = 0.98;
  double horizon_factor = 3.0;
};

struct BlowupClassification {
  BlowupLabel label = BlowupLabel::Bounded;
  bool ambiguous = false;
  double growth_per_decade = 0.0;
  double r2_loglog = 0.0;    // log sup_u against log t
  double r2_semilog = 0.0;   // log sup_u against t
  double growth_slope = 0.0; // slope of the better of the two
  double r2_singular = 0.0;  // log sup_u against log(T* - t)
  double t_star = 0.0;       // best-fit singular time (valid if t_star_interior)
  double singular_exponent = 0.0;
  bool t_star_interior = false;
  std::size_t tail_samples = 0;
};

/// Classifies the tail half of a (t, sup u) series. Tests a finite-time
/// singular fit first, then boundedness, then monotone unbounded growth.
/// Throws ConfigError for fewer than 20 samples or mismatched lengths.
BlowupClassification classify_blowup(std::span<const double> times, std::span<const double> sup_u,
                                     const ClassifierThresholds& thresholds = {});

}  // namespace chemolab
