#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles/gram_oracle.hpp"
#include "oracles/lp_oracle.hpp"
#include "oracles/quadrature_oracle.hpp"

// Checks on the independent oracles themselves, against hand-derived values.

TEST(Oracles, GaussLegendreIsExactForPolynomials) {
  const auto rule = oracle::gauss_legendre(10);
  for (int p = 0; p < 20; ++p) {
    double s = 0.0;
    for (const auto& [x, w] : rule) s += w * std::pow(x, p);
    const double want = p % 2 == 0 ? 2.0 / (p + 1) : 0.0;
    EXPECT_NEAR(s, want, 1e-14) << p;
  }
}

TEST(Oracles, CompositeIntegration) {
  EXPECT_NEAR(oracle::integrate([](double t) { return std::exp(t); }, 0.0, 1.0), std::exp(1.0) - 1.0, 1e-14);
  EXPECT_NEAR(oracle::integrate([](double t) { return std::sin(t); }, 0.0, std::numbers::pi), 2.0, 1e-14);
}

TEST(Oracles, ThetaWeightTotals) {
  // Total mass 2^(a+b+1) B(a+1, b+1).
  for (double a : {-0.5, 0.0, 0.5, 1.0}) {
    for (double b : {-0.5, 0.0, 0.5, 1.0}) {
      const double want = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                          std::tgamma(a + b + 2.0);
      const double got = oracle::integrate([&](double th) { return oracle::jacobi_theta_weight(a, b, th); }, 0.0,
                                           std::numbers::pi);
      EXPECT_NEAR(got, want, 1e-13);
      EXPECT_NEAR(oracle::jacobi_measure(a, b, -1.0, 1.0), 1.0, 1e-14);
    }
  }
  // Uniform measure of [0, 0.5] and Chebyshev measure of [0, 1].
  EXPECT_NEAR(oracle::jacobi_measure(0.0, 0.0, 0.0, 0.5), 0.25, 1e-14);
  EXPECT_NEAR(oracle::jacobi_measure(-0.5, -0.5, 0.0, 1.0), 0.5, 1e-14);
}

TEST(Oracles, SimplexSmallPrograms) {
  // min x1 + 2 x2 subject to x1 + x2 = 1: x = (1, 0).
  Eigen::MatrixXd a(1, 2);
  a << 1.0, 1.0;
  Eigen::VectorXd b(1), c(2);
  b << 1.0;
  c << 1.0, 2.0;
  const auto r = oracle::simplex(a, b, c);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.value, 1.0, 1e-14);
  EXPECT_NEAR(r.x(0), 1.0, 1e-14);
  // Infeasible: x1 + x2 = -1 with x >= 0.
  b << -1.0;
  EXPECT_FALSE(oracle::simplex(a, b, c).feasible);
  // Weighted l1: min |z1| + 3 |z2| with z1 + z2 = -2 gives 2.
  Eigen::VectorXd y(1), w(2);
  y << -2.0;
  w << 1.0, 3.0;
  const auto l1 = oracle::weighted_l1_equality(a, y, w);
  ASSERT_TRUE(l1.feasible);
  EXPECT_NEAR(l1.value, 2.0, 1e-14);
  EXPECT_NEAR(l1.x(0), -2.0, 1e-14);
}

TEST(Oracles, GramHelpers) {
  Eigen::MatrixXcd u(2, 2);
  u << std::sqrt(0.5), std::sqrt(0.5) * 0.5, std::sqrt(0.5), -std::sqrt(0.5) * 0.5;
  const Eigen::MatrixXcd d = oracle::gram_deviation(u, 2);
  EXPECT_NEAR(std::abs(d(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(d(1, 1).real(), 0.75, 1e-15);
  EXPECT_NEAR(oracle::spectral_norm(d), 0.75, 1e-15);
  EXPECT_NEAR(oracle::max_row_sum(d), 0.75, 1e-15);
  EXPECT_NEAR(oracle::richardson_derivative([](double t) { return std::sin(t); }, 0.3, 1e-3), std::cos(0.3), 1e-12);
}
