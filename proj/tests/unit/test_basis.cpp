#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "oracles/gram_oracle.hpp"
#include "oracles/quadrature_oracle.hpp"
#include "wl1/basis.hpp"
#include "wl1/error.hpp"
#include "unit/test_util.hpp"

using wl1::Basis;
using wl1::Complex;
using wl1::ErrorKind;
using wl1::Index;
using testutil::kind_of;

namespace {

const double kParams[] = {-0.5, 0.0, 0.5, 1.0};

// Closed-form kappa with Gamma functions.
double kappa_closed(double a, double b, long j) {
  if (j == 0) {
    return std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
           std::tgamma(a + b + 2.0);
  }
  return std::pow(2.0, a + b + 1.0) / (2.0 * j + a + b + 1.0) * std::tgamma(j + a + 1.0) *
         std::tgamma(j + b + 1.0) / (std::tgamma(j + a + b + 1.0) * std::tgamma(j + 1.0));
}

}  // namespace

TEST(Basis, LegendreExamples) {
  const Basis leg = Basis::legendre();
  EXPECT_NEAR(leg.eval(0, 0.7).real(), 1.0, 1e-15);
  EXPECT_NEAR(leg.eval(1, 1.0).real(), std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(leg.eval_deriv(1, 0.3, 1).real(), std::sqrt(3.0), 1e-13);
  EXPECT_NEAR(leg.linf_norm(0), 1.0, 1e-15);
  EXPECT_NEAR(leg.linf_norm(1), std::sqrt(3.0), 1e-14);
}

TEST(Basis, FourierExamples) {
  const Basis f = Basis::fourier();
  EXPECT_EQ(f.frequency(0), 0);
  EXPECT_EQ(f.frequency(1), -1);
  EXPECT_EQ(f.frequency(2), 1);
  EXPECT_EQ(f.frequency(3), -2);
  for (long j = -7; j <= 7; ++j) EXPECT_EQ(f.frequency(f.storage_index(j)), j);
  const Complex v = f.eval(0, 0.37);
  EXPECT_DOUBLE_EQ(v.real(), 1.0);
  EXPECT_DOUBLE_EQ(v.imag(), 0.0);
  const Complex d = f.eval_deriv(f.storage_index(1), 0.0, 1);
  EXPECT_NEAR(d.real(), 0.0, 1e-15);
  EXPECT_NEAR(d.imag(), std::numbers::pi, 1e-14);
  for (Index k = 0; k < 9; ++k) EXPECT_DOUBLE_EQ(f.linf_norm(k), 1.0);
}

TEST(Basis, FourierBandIsBalanced) {
  const Basis f = Basis::fourier();
  for (Index k : {Index{1}, Index{2}, Index{7}, Index{8}, Index{21}}) {
    long lo = 0, hi = 0;
    for (Index i = 0; i < k; ++i) {
      lo = std::min(lo, f.frequency(i));
      hi = std::max(hi, f.frequency(i));
    }
    EXPECT_LE(std::max(-lo, hi), static_cast<long>((k + 1) / 2));
    if (k % 2 == 0) {
      EXPECT_EQ(lo, -k / 2);
      EXPECT_EQ(hi, k / 2 - 1);
    }
  }
}

TEST(Basis, DerivativeOrderZeroIsEval) {
  for (const Basis& b : {Basis::legendre(), Basis::chebyshev(), Basis::jacobi(1.0, 0.5), Basis::fourier()}) {
    for (Index k = 0; k < 6; ++k) {
      const Complex a = b.eval(k, -0.41), d = b.eval_deriv(k, -0.41, 0);
      EXPECT_EQ(a, d);
    }
  }
}

TEST(Basis, Errors) {
  const Basis leg = Basis::legendre();
  EXPECT_EQ(kind_of([&] { leg.eval(0, 1.5); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([&] { leg.eval(-1, 0.0); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([&] { leg.eval_deriv(2, 0.0, 3); }), ErrorKind::Unsupported);
  EXPECT_EQ(kind_of([] { Basis::jacobi(-1.0, 0.0); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { Basis::parse("hermite"); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { Basis::fourier().eval_real(0, 0.0); }), ErrorKind::Unsupported);
}

TEST(Basis, ParseNames) {
  EXPECT_TRUE(Basis::parse("legendre") == Basis::legendre());
  EXPECT_TRUE(Basis::parse("chebyshev") == Basis::chebyshev());
  EXPECT_TRUE(Basis::parse("jacobi:0.5,1") == Basis::jacobi(0.5, 1.0));
  EXPECT_TRUE(Basis::parse("fourier").is_fourier());
}

TEST(Basis, KappaExamplesAndClosedForm) {
  EXPECT_NEAR(wl1::jacobi_kappa(0, 0, 0), 2.0, 1e-15);
  EXPECT_NEAR(wl1::jacobi_kappa(0, 0, 1), 2.0 / 3.0, 1e-15);
  for (double a : kParams) {
    for (double b : kParams) {
      for (long j = 0; j <= 20; ++j) {
        const double ref = kappa_closed(a, b, j);
        EXPECT_NEAR(wl1::jacobi_kappa(a, b, j) / ref, 1.0, 1e-12) << a << " " << b << " " << j;
      }
    }
  }
  // kappa_j ~ 2^(a+b) / j.
  for (double a : kParams) {
    const double j = 4000.0;
    EXPECT_NEAR(wl1::jacobi_kappa(a, 0.5, 4000) * j / std::pow(2.0, a + 0.5), 1.0, 1e-3);
  }
  // Large degrees stay finite.
  EXPECT_TRUE(std::isfinite(wl1::jacobi_kappa(0.5, 1.0, 500)));
}

TEST(Basis, OrthonormalAgainstThetaQuadrature) {
  for (double a : kParams) {
    for (double b : kParams) {
      const Basis basis = Basis::jacobi(a, b);
      const Index count = 51;
      std::vector<std::vector<double>> gram(count, std::vector<double>(count, 0.0));
      // Integrate in theta with the transported weight, then normalise.
      const auto rule = oracle::gauss_legendre(24);
      const int panels = 80;
      double total = 0.0;
      std::vector<double> vals(count);
      for (int p = 0; p < panels; ++p) {
        const double lo = std::numbers::pi * p / panels, width = std::numbers::pi / panels;
        for (const auto& [x, wq] : rule) {
          const double th = lo + 0.5 * width * (x + 1.0);
          const double wt = 0.5 * width * wq * oracle::jacobi_theta_weight(a, b, th);
          const double t = std::cos(th);
          total += wt;
          for (Index i = 0; i < count; ++i) vals[i] = basis.eval_real(i, t);
          for (Index i = 0; i < count; ++i) {
            for (Index j = 0; j <= i; ++j) gram[i][j] += wt * vals[i] * vals[j];
          }
        }
      }
      for (Index i = 0; i < count; ++i) {
        for (Index j = 0; j <= i; ++j) {
          EXPECT_NEAR(gram[i][j] / total, i == j ? 1.0 : 0.0, 1e-10) << a << "," << b << " " << i << "," << j;
        }
      }
    }
  }
}

TEST(Basis, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> point(-0.95, 0.95);
  for (double a : kParams) {
    for (double b : kParams) {
      const Basis basis = Basis::jacobi(a, b);
      for (int trial = 0; trial < 25; ++trial) {
        const double t = point(rng);
        for (Index k = 0; k <= 12; ++k) {
          const double fd = oracle::richardson_derivative([&](double s) { return basis.eval_real(k, s); }, t, 1e-3);
          const double d1 = basis.eval_deriv(k, t, 1).real();
          EXPECT_LE(std::abs(fd - d1), 1e-6 * std::max(1.0, std::abs(d1)));
          const double fd2 = oracle::richardson_derivative([&](double s) { return basis.eval_deriv(k, s, 1).real(); }, t, 1e-3);
          const double d2 = basis.eval_deriv(k, t, 2).real();
          EXPECT_LE(std::abs(fd2 - d2), 1e-6 * std::max(1.0, std::abs(d2)));
        }
      }
    }
  }
}

TEST(Basis, FourierDerivatives) {
  const Basis f = Basis::fourier();
  for (long j : {-3L, 2L, 5L}) {
    const Index k = f.storage_index(j);
    const double t = 0.23;
    const Complex d2 = f.eval_deriv(k, t, 2);
    const Complex want = -std::pow(std::numbers::pi * j, 2) * f.eval(k, t);
    EXPECT_NEAR(std::abs(d2 - want), 0.0, 1e-11);
  }
}

TEST(Basis, ReflectionSymmetry) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> point(-1.0, 1.0);
  for (double a : kParams) {
    for (double b : kParams) {
      const Basis ab = Basis::jacobi(a, b), ba = Basis::jacobi(b, a);
      for (int trial = 0; trial < 20; ++trial) {
        const double t = point(rng);
        for (Index k = 0; k < 30; ++k) {
          const double sign = (k % 2 == 0) ? 1.0 : -1.0;
          const double lhs = ab.eval_real(k, -t), rhs = sign * ba.eval_real(k, t);
          EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
        }
      }
    }
  }
}

TEST(Basis, UniformNormGrowthExponent) {
  for (double a : kParams) {
    for (double b : kParams) {
      const Basis basis = Basis::jacobi(a, b);
      const double q = std::max({a, b, -0.5});
      std::vector<double> x, y;
      for (Index j = 50; j <= 500; j += 25) {
        x.push_back(std::log(static_cast<double>(j)));
        y.push_back(std::log(basis.linf_norm(j)));
      }
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
      }
      mx /= x.size();
      my /= y.size();
      double sxy = 0, sxx = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
      }
      EXPECT_NEAR(sxy / sxx, q + 0.5, 0.1) << a << "," << b;
    }
  }
}

TEST(Basis, UniformNormInteriorFallback) {
  const Basis basis = Basis::jacobi(-0.7, -0.8);
  for (Index k : {Index{1}, Index{4}, Index{9}}) {
    double dense = 0.0;
    for (int i = 0; i <= 200000; ++i) {
      dense = std::max(dense, std::abs(basis.eval_real(k, -1.0 + 2.0 * i / 200000.0)));
    }
    EXPECT_GE(basis.linf_norm(k), dense * (1.0 - 1e-9));
    EXPECT_LE(basis.linf_norm(k), dense * (1.0 + 1e-6));
    EXPECT_GE(basis.linf_norm(k), 1.0);
  }
}

// ||p'|| in the (a+1, b+1) weight against sqrt(lambda_M) ||p|| in the (a, b)
// weight, unnormalised; P_M itself attains the bound.
TEST(Basis, MarkovTypeInequality) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<int> degree(1, 30);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = kParams[pick(rng)], b = kParams[pick(rng)];
    const int m = degree(rng);
    const Basis basis = Basis::jacobi(a, b);
    std::vector<double> c(m + 1);
    for (double& v : c) v = normal(rng);
    if (trial % 10 == 0) {
      std::fill(c.begin(), c.end(), 0.0);
      c[m] = 1.0;
    }
    auto p = [&](double t) {
      double s = 0.0;
      for (int k = 0; k <= m; ++k) s += c[k] * basis.eval_real(k, t);
      return s;
    };
    auto dp = [&](double t) {
      double s = 0.0;
      for (int k = 0; k <= m; ++k) s += c[k] * basis.eval_deriv(k, t, 1).real();
      return s;
    };
    const double norm_p = oracle::integrate(
        [&](double th) { const double v = p(std::cos(th)); return v * v * oracle::jacobi_theta_weight(a, b, th); },
        0.0, std::numbers::pi, 16, 24);
    const double norm_dp = oracle::integrate(
        [&](double th) { const double v = dp(std::cos(th)); return v * v * oracle::jacobi_theta_weight(a + 1, b + 1, th); },
        0.0, std::numbers::pi, 16, 24);
    const double lambda = m * (m + a + b + 1.0);
    EXPECT_LE(std::sqrt(norm_dp), std::sqrt(lambda) * std::sqrt(norm_p) * (1.0 + 1e-9));
    if (trial % 10 == 0) EXPECT_NEAR(norm_dp / norm_p, lambda, 1e-8 * lambda);
  }
}

TEST(Basis, DensityAndMeasure) {
  for (double a : kParams) {
    for (double b : kParams) {
      const Basis basis = Basis::jacobi(a, b);
      EXPECT_NEAR(basis.measure(-1.0, 1.0), 1.0, 1e-14);
      for (double lo : {-1.0, -0.6, 0.1}) {
        const double hi = lo + 0.35;
        EXPECT_NEAR(basis.measure(lo, hi), oracle::jacobi_measure(a, b, lo, hi), 1e-12);
      }
    }
  }
  EXPECT_NEAR(Basis::fourier().measure(-0.5, 0.5), 0.5, 1e-15);
}

TEST(Basis, ProjectionExamples) {
  const Basis leg = Basis::legendre();
  const auto third = wl1::project_coefficients([&](double t) { return leg.eval_real(2, t); }, leg, 5);
  ASSERT_TRUE(third.converged);
  for (Index k = 0; k < 5; ++k) EXPECT_NEAR(std::abs(third.coefficients(k)), k == 2 ? 1.0 : 0.0, 1e-13);
  const auto linear = wl1::project_coefficients([](double t) { return t; }, leg, 2);
  EXPECT_NEAR(linear.coefficients(0).real(), 0.0, 1e-14);
  EXPECT_NEAR(linear.coefficients(1).real(), 1.0 / std::sqrt(3.0), 1e-14);
  const Basis f = Basis::fourier();
  const auto one = wl1::project_coefficients([](double) { return 1.0; }, f, 3);
  EXPECT_NEAR(std::abs(one.coefficients(0) - 1.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(one.coefficients(1)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(one.coefficients(2)), 0.0, 1e-13);
}

TEST(Basis, EvalAllMatchesEval) {
  const Basis cheb = Basis::chebyshev();
  std::vector<double> out(40);
  cheb.eval_all(0.3, out);
  for (Index k = 0; k < 40; ++k) EXPECT_NEAR(out[k], cheb.eval_real(k, 0.3), 1e-13);
  const Basis f = Basis::fourier();
  std::vector<Complex> cout(11);
  f.eval_all(-0.8, cout);
  for (Index k = 0; k < 11; ++k) EXPECT_NEAR(std::abs(cout[k] - f.eval(k, -0.8)), 0.0, 1e-15);
}
