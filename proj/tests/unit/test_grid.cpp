#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chemolab/error.hpp"
#include "chemolab/grid.hpp"
#include "oracles.hpp"

using namespace chemolab;

namespace {

Field random_field(std::size_t m, unsigned seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Field f(m);
  for (auto& x : f) x = dist(rng);
  return f;
}

double sup_diff(const Field& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST(RadialGrid, RejectsBadParameters) {
  EXPECT_THROW(RadialGrid(0, 1.0, 16), ConfigError);
  EXPECT_THROW(RadialGrid(3, 0.0, 16), ConfigError);
  EXPECT_THROW(RadialGrid(3, -1.0, 16), ConfigError);
  EXPECT_THROW(RadialGrid(3, 1.0, 3), ConfigError);
  EXPECT_NO_THROW(RadialGrid(3, 1.0, 4));
}

TEST(RadialGrid, SphereAreaMatchesGammaFunction) {
  for (int n = 1; n <= 8; ++n) {
    EXPECT_NEAR(unit_sphere_area(n), static_cast<double>(oracle::sphere_area(n)), 1e-14 * unit_sphere_area(n)) << n;
  }
  EXPECT_NEAR(unit_sphere_area(3), 4.0 * std::numbers::pi, 1e-14);
}

TEST(RadialGrid, VolumesSumToBall) {
  for (int n : {1, 2, 3, 4, 5}) {
    for (std::size_t m : {4u, 17u, 256u}) {
      const RadialGrid g(n, 2.3, m);
      double s = 0.0;
      for (double w : g.cell_volumes()) s += w;
      const double exact = static_cast<double>(oracle::ball_volume(n, 2.3L));
      EXPECT_NEAR(s, exact, 1e-13 * exact) << "n=" << n << " M=" << m;
      EXPECT_NEAR(g.measure(), exact, 1e-13 * exact);
    }
  }
}

TEST(RadialGrid, GeometryMatchesExtendedPrecision) {
  const RadialGrid g(4, 1.5, 50);
  const oracle::Geometry o(4, 1.5L, 50);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_NEAR(g.cell_volumes()[i], static_cast<double>(o.volume[i]), 1e-13 * static_cast<double>(o.volume[i]));
    EXPECT_DOUBLE_EQ(g.centers()[i], (i + 0.5) * 1.5 / 50);
  }
  ASSERT_EQ(g.face_conductances().size(), 49u);
  for (std::size_t i = 0; i < 49; ++i) {
    const double k = static_cast<double>(o.area[i] / o.h);
    EXPECT_NEAR(g.face_conductances()[i], k, 1e-13 * k);
  }
  EXPECT_EQ(g.face_areas().front(), 0.0);
}

TEST(RadialGrid, CheckFieldRejectsWrongLength) {
  const RadialGrid g(2, 1.0, 8);
  EXPECT_THROW(g.check_field(Field(7)), ConfigError);
  EXPECT_THROW(apply_laplacian(g, Field(9)), ConfigError);
  EXPECT_THROW(helmholtz_solve(g, Field(3)), ConfigError);
}

TEST(Laplacian, AgreesWithDenseOperator) {
  for (int n : {1, 2, 3, 5}) {
    const RadialGrid g(n, 1.0, 64);
    const oracle::Geometry o(n, 1.0L, 64);
    const Field f = random_field(64, 100 + n, -1.0, 1.0);
    const auto ref = oracle::laplacian(o, f.values());
    double scale = 0.0;
    for (double x : ref) scale = std::max(scale, std::abs(x));
    EXPECT_LE(sup_diff(apply_laplacian(g, f), ref), 1e-12 * scale) << n;
  }
}

TEST(Laplacian, ConservesIntegral) {
  for (int n : {1, 2, 3, 5}) {
    const RadialGrid g(n, 1.0, 100);
    const Field f = random_field(100, 7 + n);
    const Field lf = apply_laplacian(g, f);
    double scale = 0.0;
    for (std::size_t i = 0; i < 100; ++i) scale += g.cell_volumes()[i] * std::abs(lf[i]);
    EXPECT_LE(std::abs(integrate(g, lf)), 1e-13 * scale) << n;
  }
}

TEST(Laplacian, ConstantsAreInKernel) {
  const RadialGrid g(3, 1.0, 64);
  EXPECT_EQ(apply_laplacian(g, Field(64, 3.0)).max_abs(), 0.0);
}

TEST(Laplacian, SelfAdjointInWeightedInnerProduct) {
  for (int n : {1, 3, 4}) {
    const RadialGrid g(n, 1.0, 64);
    const Field f = random_field(64, 31, -1.0, 1.0), h = random_field(64, 32, -1.0, 1.0);
    const double a = integrate(g, multiply(apply_laplacian(g, f), h));
    const double b = integrate(g, multiply(f, apply_laplacian(g, h)));
    EXPECT_NEAR(a, b, 1e-12 * (std::abs(a) + std::abs(b)));
    // Negative semidefinite, with the Dirichlet form as the gap.
    EXPECT_NEAR(integrate(g, multiply(apply_laplacian(g, f), f)), -gradient_squared_integral(g, f),
                1e-12 * gradient_squared_integral(g, f));
  }
}

TEST(Laplacian, EigenfunctionRefinementOrderOneDimension) {
  std::vector<double> hs, errs;
  for (std::size_t m : {64u, 128u, 256u}) {
    const RadialGrid g(1, 1.0, m);
    Field f(m);
    std::vector<double> exact(m);
    for (std::size_t i = 0; i < m; ++i) {
      f[i] = std::cos(std::numbers::pi * g.centers()[i]);
      exact[i] = -std::numbers::pi * std::numbers::pi * f[i];
    }
    hs.push_back(g.spacing());
    errs.push_back(sup_diff(apply_laplacian(g, f), exact));
  }
  EXPECT_NEAR(oracle::fitted_order(hs, errs), 2.0, 0.1);
}

TEST(Laplacian, EigenfunctionRefinementOrderBall) {
  // sin(kr)/r with tan(kR) = kR is a Neumann eigenfunction on the 3-ball.
  // The pointwise truncation error of the finite-volume operator is only
  // first order next to the origin, but the Helmholtz solution converges at
  // second order (checked in Helmholtz.EigenfunctionRefinementOrderBall).
  const double k = static_cast<double>(oracle::neumann_root_3d(1.0L));
  std::vector<double> hs, errs;
  for (std::size_t m : {64u, 128u, 256u}) {
    const RadialGrid g(3, 1.0, m);
    Field f(m);
    std::vector<double> exact(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double r = g.centers()[i];
      f[i] = std::sin(k * r) / r;
      exact[i] = -k * k * f[i];
    }
    hs.push_back(g.spacing());
    errs.push_back(sup_diff(apply_laplacian(g, f), exact));
  }
  EXPECT_GE(oracle::fitted_order(hs, errs), 0.9);
}

TEST(Helmholtz, AgreesWithDenseLu) {
  for (int n : {1, 2, 3, 4, 5}) {
    for (std::size_t m : {16u, 64u, 200u}) {
      const RadialGrid g(n, 1.3, m);
      const oracle::Geometry o(n, 1.3L, m);
      const Field f = random_field(m, 40 + n);
      const auto ref = oracle::helmholtz(o, f.values());
      double scale = 0.0;
      for (double x : ref) scale = std::max(scale, std::abs(x));
      EXPECT_LE(sup_diff(helmholtz_solve(g, f), ref), 1e-12 * scale) << "n=" << n << " M=" << m;
    }
  }
}

TEST(Helmholtz, ConstantIsReproducedExactly) {
  const RadialGrid g(3, 1.0, 64);
  const Field w = helmholtz_solve(g, Field(64, 2.5));
  for (double x : w) EXPECT_EQ(x, 2.5);
}

TEST(Helmholtz, EigenfunctionRefinementOrderOneDimension) {
  const double k2 = std::numbers::pi * std::numbers::pi;
  std::vector<double> hs, errs;
  for (std::size_t m : {64u, 128u, 256u}) {
    const RadialGrid g(1, 1.0, m);
    Field u(m);
    std::vector<double> exact(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double c = std::cos(std::numbers::pi * g.centers()[i]);
      u[i] = (1.0 + k2) * c + 1.5;
      exact[i] = c + 1.5;
    }
    hs.push_back(g.spacing());
    errs.push_back(sup_diff(helmholtz_solve(g, u), exact));
  }
  EXPECT_NEAR(oracle::fitted_order(hs, errs), 2.0, 0.1);
}

TEST(Helmholtz, EigenfunctionRefinementOrderBall) {
  const double k = static_cast<double>(oracle::neumann_root_3d(1.0L));
  std::vector<double> hs, errs;
  for (std::size_t m : {64u, 128u, 256u}) {
    const RadialGrid g(3, 1.0, m);
    Field u(m);
    std::vector<double> exact(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double r = g.centers()[i];
      const double phi = std::sin(k * r) / r;
      u[i] = (1.0 + k * k) * phi + 4.0;
      exact[i] = phi + 4.0;
    }
    hs.push_back(g.spacing());
    errs.push_back(sup_diff(helmholtz_solve(g, u), exact));
  }
  EXPECT_NEAR(oracle::fitted_order(hs, errs), 2.0, 0.1);
}

TEST(Helmholtz, PreservesIntegralOfNonnegativeData) {
  for (int n : {1, 3, 5}) {
    const RadialGrid g(n, 1.0, 128);
    const Field u = random_field(128, 70 + n);
    EXPECT_NEAR(integrate(g, helmholtz_solve(g, u)), integrate(g, u), 1e-11 * integrate(g, u));
  }
}

TEST(Helmholtz, MaximumPrinciple) {
  for (int n : {1, 2, 3}) {
    for (unsigned seed = 0; seed < 20; ++seed) {
      const RadialGrid g(n, 1.0, 48);
      const Field f = random_field(48, seed * 7 + n, 0.0, 5.0);
      const Field w = helmholtz_solve(g, f);
      EXPECT_GE(w.min(), f.min() * (1.0 - 1e-13));
      EXPECT_LE(w.max(), f.max() * (1.0 + 1e-13));
    }
  }
}

TEST(Tridiagonal, MatchesDenseSolve) {
  const std::size_t m = 30;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  oracle::Matrix a = oracle::Matrix::Zero(m, m);
  oracle::Vector b(m);
  for (std::size_t i = 0; i < m; ++i) {
    lower[i] = i ? dist(rng) : 0.0;
    upper[i] = i + 1 < m ? dist(rng) : 0.0;
    diag[i] = 3.0 + dist(rng);
    rhs[i] = dist(rng);
    a(i, i) = diag[i];
    if (i) a(i, i - 1) = lower[i];
    if (i + 1 < m) a(i, i + 1) = upper[i];
    b(i) = rhs[i];
  }
  const oracle::Vector ref = a.partialPivLu().solve(b);
  const auto x = solve_tridiagonal(lower, diag, upper, rhs);
  for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(x[i], static_cast<double>(ref(i)), 1e-13);
}

TEST(Integrate, ExactForPolynomialCellAverages) {
  // Cell averages of r^2 in 1D integrate to R^3/3 exactly (up to rounding).
  const RadialGrid g(1, 2.0, 40);
  Field f(40);
  for (std::size_t i = 0; i < 40; ++i) {
    const double a = g.faces()[i], b = g.faces()[i + 1];
    f[i] = (b * b * b - a * a * a) / (3.0 * (b - a));
  }
  EXPECT_NEAR(integrate(g, f), 2.0 * 8.0 / 3.0, 1e-13);  // |S^0| = 2
}

TEST(GradientSquared, ConvergesToQuadrature) {
  // int |grad f|^2 over the 3-ball for f = cos(pi r).
  const double exact = static_cast<double>(oracle::integrate(
      [](long double r) {
        const long double d = std::numbers::pi_v<long double> * std::sin(std::numbers::pi_v<long double> * r);
        return 4.0L * std::numbers::pi_v<long double> * r * r * d * d;
      },
      0.0L, 1.0L));
  std::vector<double> hs, errs;
  for (std::size_t m : {64u, 128u, 256u}) {
    const RadialGrid g(3, 1.0, m);
    Field f(m);
    for (std::size_t i = 0; i < m; ++i) f[i] = std::cos(std::numbers::pi * g.centers()[i]);
    hs.push_back(g.spacing());
    errs.push_back(std::abs(gradient_squared_integral(g, f) - exact));
  }
  EXPECT_LT(errs.back(), 1e-3 * exact);
  EXPECT_NEAR(oracle::fitted_order(hs, errs), 2.0, 0.2);
}
