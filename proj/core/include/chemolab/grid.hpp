#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace chemolab {

/// One scalar sample per grid cell. Used for u, v, w and z alike.
class Field {
 public:
  Field() = default;
  explicit Field(std::size_t cells, double fill = 0.0) : values_(cells, fill) {}
  explicit Field(std::vector<double> values) : values_(std::move(values)) {}
  Field(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  std::span<double> span() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool all_finite() const noexcept;
  double max() const noexcept;
  double min() const noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::vector<double> values_;
};

/// Uniform finite-volume mesh of the ball B_R(0) in R^n, reduced to the
/// radial coordinate. Cell i covers [i*h, (i+1)*h]; the face at r = 0 and the
/// face at r = R carry zero flux.
class RadialGrid {
 public:
  /// Throws ConfigError unless n >= 1, R > 0 and M >= 4.
  RadialGrid(int dimension, double radius, std::size_t cells);

  int dimension() const noexcept { return dimension_; }
  double radius() const noexcept { return radius_; }
  std::size_t cells() const noexcept { return cells_; }
  double spacing() const noexcept { return spacing_; }

  std::span<const double> centers() const noexcept { return centers_; }
  std::span<const double> faces() const noexcept { return faces_; }
  std::span<const double> cell_volumes() const noexcept { return volumes_; }
  /// |S^{n-1}| r^{n-1} at all M+1 faces (geometric value, boundary included).
  std::span<const double> face_areas() const noexcept { return areas_; }
  /// a_{i+1/2} / h for the M-1 interior faces; entry i couples cells i, i+1.
  std::span<const double> face_conductances() const noexcept { return conductances_; }

  /// Sum of cell volumes, i.e. |B_R| up to rounding.
  double measure() const noexcept { return measure_; }

  void check_field(const Field& f) const;

 private:
  int dimension_;
  double radius_;
  std::size_t cells_;
  double spacing_;
  double measure_ = 0.0;
  std::vector<double> centers_;
  std::vector<double> faces_;
  std::vector<double> volumes_;
  std::vector<double> areas_;
  std::vector<double> conductances_;
};

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int dimension);
/// |B_R| = pi^{n/2} R^n / Gamma(n/2 + 1).
double ball_volume(int dimension, double radius);

RadialGrid build_radial_grid(int dimension, double radius, std::size_t cells);

/// Conservative Neumann Laplacian; zero flux through r = 0 and r = R.
Field apply_laplacian(const RadialGrid& grid, const Field& f);

/// Solves (I - Delta_h) w = f with a direct tridiagonal factorization.
Field helmholtz_solve(const RadialGrid& grid, const Field& f);

/// sum_i omega_i f_i (compensated summation).
double integrate(const RadialGrid& grid, const Field& f);

/// Face quadrature of int |grad f|^2; boundary faces contribute nothing.
double gradient_squared_integral(const RadialGrid& grid, const Field& f);

/// Pointwise product, used for f*g integrands.
Field multiply(const Field& a, const Field& b);

/// Solves a tridiagonal system with the Thomas algorithm. lower[0] and
/// upper[n-1] are ignored. Throws InternalError on a zero pivot.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

}  // namespace chemolab
