#include "chemolab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chemolab/error.hpp"

namespace chemolab {

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double Field::max() const noexcept {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double Field::min() const noexcept {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

double unit_sphere_area(int dimension) {
  const double half = 0.5 * dimension;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double ball_volume(int dimension, double radius) {
  const double half = 0.5 * dimension;
  return std::pow(std::numbers::pi, half) * std::pow(radius, dimension) / std::tgamma(half + 1.0);
}

RadialGrid::RadialGrid(int dimension, double radius, std::size_t cells)
    : dimension_(dimension), radius_(radius), cells_(cells), spacing_(0.0) {
  if (dimension < 1) throw ConfigError("grid: dimension must be >= 1, got " + std::to_string(dimension));
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("grid: radius must be positive and finite");
  if (cells < 4) throw ConfigError("grid: need at least 4 cells, got " + std::to_string(cells));

  spacing_ = radius / static_cast<double>(cells);
  const double sphere = unit_sphere_area(dimension);

  faces_.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) faces_[i] = static_cast<double>(i) * spacing_;
  faces_.back() = radius;

  centers_.resize(cells);
  volumes_.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    centers_[i] = 0.5 * (faces_[i] + faces_[i + 1]);
    volumes_[i] = sphere / dimension * (std::pow(faces_[i + 1], dimension) - std::pow(faces_[i], dimension));
  }

  areas_.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) areas_[i] = sphere * std::pow(faces_[i], dimension - 1);

  conductances_.resize(cells - 1);
  for (std::size_t i = 0; i + 1 < cells; ++i) conductances_[i] = areas_[i + 1] / spacing_;

  measure_ = integrate(*this, Field(cells, 1.0));
}

void RadialGrid::check_field(const Field& f) const {
  if (f.size() != cells_) {
    throw ConfigError("field length " + std::to_string(f.size()) + " does not match grid cell count " +
                      std::to_string(cells_));
  }
}

RadialGrid build_radial_grid(int dimension, double radius, std::size_t cells) {
  return RadialGrid(dimension, radius, cells);
}

Field apply_laplacian(const RadialGrid& grid, const Field& f) {
  grid.check_field(f);
  const auto k = grid.face_conductances();
  const auto vol = grid.cell_volumes();
  const std::size_t m = grid.cells();

  Field out(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double flux = k[i] * (f[i + 1] - f[i]);
    out[i] += flux;
    out[i + 1] -= flux;
  }
  for (std::size_t i = 0; i < m; ++i) out[i] /= vol[i];
  return out;
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw InternalError("solve_tridiagonal: band length mismatch");
  }
  std::vector<double> c(n), d(n);
  double pivot = diag[0];
  if (pivot == 0.0) throw InternalError("solve_tridiagonal: zero pivot at row 0");
  c[0] = upper[0] / pivot;
  d[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw InternalError("solve_tridiagonal: singular pivot at row " + std::to_string(i));
    }
    c[i] = (i + 1 < n) ? upper[i] / pivot : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

Field helmholtz_solve(const RadialGrid& grid, const Field& f) {
  grid.check_field(f);
  const auto k = grid.face_conductances();
  const auto vol = grid.cell_volumes();
  const std::size_t m = grid.cells();

  // Volume-weighted form: symmetric, strictly diagonally dominant. Solved for
  // the increment w - f, whose right-hand side is the net face flux of f, so
  // constants are reproduced exactly.
  std::vector<double> lower(m, 0.0), diag(m), upper(m, 0.0), rhs(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) diag[i] = vol[i];
  for (std::size_t i = 0; i + 1 < m; ++i) {
    diag[i] += k[i];
    diag[i + 1] += k[i];
    upper[i] = -k[i];
    lower[i + 1] = -k[i];
    const double flux = k[i] * (f[i + 1] - f[i]);
    rhs[i] += flux;
    rhs[i + 1] -= flux;
  }
  std::vector<double> w = solve_tridiagonal(lower, diag, upper, rhs);
  for (std::size_t i = 0; i < m; ++i) w[i] += f[i];

  // One sweep of residual correction. The elimination alone loses a factor
  // of roughly M^2 on rough data; the residual is again assembled from face
  // fluxes, so it vanishes identically for constants.
  for (std::size_t i = 0; i < m; ++i) rhs[i] = vol[i] * (f[i] - w[i]);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double flux = k[i] * (w[i + 1] - w[i]);
    rhs[i] += flux;
    rhs[i + 1] -= flux;
  }
  const std::vector<double> correction = solve_tridiagonal(lower, diag, upper, rhs);
  for (std::size_t i = 0; i < m; ++i) w[i] += correction[i];
  return Field(std::move(w));
}

double integrate(const RadialGrid& grid, const Field& f) {
  grid.check_field(f);
  const auto vol = grid.cell_volumes();
  // Neumaier summation keeps mass bookkeeping at rounding level for large M.
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double term = vol[i] * f[i];
    const double t = sum + term;
    comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double gradient_squared_integral(const RadialGrid& grid, const Field& f) {
  grid.check_field(f);
  const auto k = grid.face_conductances();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double jump = f[i + 1] - f[i];
    sum += k[i] * jump * jump;
  }
  return sum;
}

Field multiply(const Field& a, const Field& b) {
  if (a.size() != b.size()) throw ConfigError("multiply: field length mismatch");
  Field out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace chemolab
