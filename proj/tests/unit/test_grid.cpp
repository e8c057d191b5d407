#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles/quadrature_oracle.hpp"
#include "unit/test_util.hpp"
#include "wl1/grid.hpp"

using testutil::kind_of;
using wl1::Basis;
using wl1::ErrorKind;
using wl1::GhostRule;
using wl1::GridKind;
using wl1::Index;
using wl1::PointSet;

namespace {

std::vector<double> random_sorted(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> p(n);
  for (double& v : p) v = u(rng);
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

double brute_h(const std::vector<double>& p) {
  double h = std::max(p.front() + 1.0, 1.0 - p.back());
  for (std::size_t i = 0; i + 1 < p.size(); ++i) h = std::max(h, 0.5 * (p[i + 1] - p[i]));
  return h;
}

}  // namespace

TEST(Grid, TwoPointUniform) {
  const PointSet ps = PointSet::build({-0.5, 0.5}, Basis::legendre());
  ASSERT_EQ(ps.size(), 2);
  EXPECT_NEAR(ps.tau()[0], 0.5, 1e-15);
  EXPECT_NEAR(ps.tau()[1], 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(ps.h(), 0.5);
}

TEST(Grid, ThreePointGhostRule) {
  const PointSet ps = PointSet::build({-0.5, 0.0, 0.5}, Basis::legendre(), GhostRule::Jacobi);
  EXPECT_DOUBLE_EQ(ps.xi(), 0.25);
  EXPECT_DOUBLE_EQ(ps.h(), 0.5);
  EXPECT_FALSE(ps.degenerate());
}

TEST(Grid, EndpointNodesAreDegenerate) {
  const PointSet ps = PointSet::build({-1.0, 0.0, 1.0}, Basis::legendre(), GhostRule::Jacobi);
  EXPECT_EQ(ps.xi(), 0.0);
  EXPECT_TRUE(ps.degenerate());
  const PointSet pf = PointSet::build({-1.0, 0.0, 0.5}, Basis::fourier(), GhostRule::Fourier);
  EXPECT_TRUE(pf.degenerate());
  const PointSet pi = PointSet::build({-0.5, 0.0, 0.5}, Basis::fourier(), GhostRule::Fourier);
  EXPECT_DOUBLE_EQ(pi.xi(), 0.25);
}

TEST(Grid, DefaultGhostRuleFollowsBasis) {
  EXPECT_EQ(wl1::default_ghost_rule(Basis::chebyshev()), GhostRule::Jacobi);
  EXPECT_EQ(wl1::default_ghost_rule(Basis::fourier()), GhostRule::Fourier);
}

TEST(Grid, Errors) {
  const Basis leg = Basis::legendre();
  EXPECT_EQ(kind_of([&] { PointSet::build({}, leg); }), ErrorKind::Empty);
  EXPECT_EQ(kind_of([&] { PointSet::build({0.2, 0.2}, leg); }), ErrorKind::DegenerateGrid);
  EXPECT_EQ(kind_of([&] { PointSet::build({0.3, -0.2}, leg); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([&] { PointSet::build({0.0, 1.2}, leg); }), ErrorKind::Domain);
  const PointSet ps = PointSet::build({0.0, 0.5}, leg);
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 2.0};
  EXPECT_EQ(kind_of([&] { wl1::discrete_inner_product(ps, one, two); }), ErrorKind::Dimension);
  EXPECT_EQ(kind_of([] { wl1::parse_grid_kind("hexagonal"); }), ErrorKind::Domain);
}

TEST(Grid, GeneratedEquispaced) {
  EXPECT_EQ(wl1::generate_points({GridKind::Equispaced, 1.0}, 3, 1), (std::vector<double>{-1.0, 0.0, 1.0}));
  const auto p = wl1::generate_points({GridKind::Equispaced, 1.0}, 11, 1);
  ASSERT_EQ(p.size(), 11u);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) EXPECT_NEAR(p[i + 1] - p[i], 0.2, 1e-15);
  EXPECT_NEAR(PointSet::build(p, Basis::legendre()).h(), 0.1, 1e-15);
  EXPECT_EQ(wl1::generate_points({GridKind::Equispaced, 1.0}, 1, 1), (std::vector<double>{0.0}));
}

TEST(Grid, ZeroJitterIsEquispaced) {
  EXPECT_EQ(wl1::generate_points({GridKind::Jittered, 0.0}, 17, 99),
            wl1::generate_points({GridKind::Equispaced, 1.0}, 17, 99));
}

TEST(Grid, GeneratorsAreDeterministicAndValid) {
  for (GridKind kind : {GridKind::Jittered, GridKind::UniformRandom, GridKind::Chebyshev}) {
    const auto a = wl1::generate_points({kind, 1.0}, 40, 5);
    const auto b = wl1::generate_points({kind, 1.0}, 40, 5);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    EXPECT_GE(a.front(), -1.0);
    EXPECT_LE(a.back(), 1.0);
    EXPECT_NO_THROW(PointSet::build(a, Basis::legendre()));
  }
  const auto j1 = wl1::generate_points({GridKind::Jittered, 1.0}, 40, 5);
  const auto j2 = wl1::generate_points({GridKind::Jittered, 1.0}, 40, 6);
  EXPECT_NE(j1, j2);
  const auto cheb = wl1::generate_points({GridKind::Chebyshev, 1.0}, 5, 1);
  EXPECT_NEAR(cheb[1], -std::cos(M_PI / 4.0), 1e-15);
  EXPECT_EQ(wl1::parse_grid_kind(wl1::to_string(GridKind::Jittered)), GridKind::Jittered);
}

TEST(Grid, JitterStaysWithinHalfSpacing) {
  const int n = 21;
  const auto eq = wl1::generate_points({GridKind::Equispaced, 1.0}, n, 1);
  const auto jit = wl1::generate_points({GridKind::Jittered, 0.5}, n, 3);
  ASSERT_EQ(jit.size(), eq.size());
  std::vector<double> sorted = jit;
  // Amplitude 1/2 moves each node at most a quarter spacing, so order is preserved.
  for (int i = 0; i < n; ++i) EXPECT_LE(std::abs(sorted[i] - eq[i]), 0.25 * 0.1 + 1e-15);
}

TEST(Grid, InnerProductExamples) {
  const PointSet ps = PointSet::build({-0.5, 0.5}, Basis::legendre());
  const Basis leg = Basis::legendre();
  std::vector<double> phi2{leg.eval_real(1, -0.5), leg.eval_real(1, 0.5)};
  EXPECT_NEAR(wl1::discrete_inner_product(ps, phi2, phi2), 0.75, 1e-15);
  std::vector<double> ones{1.0, 1.0}, zeros{0.0, 0.0};
  EXPECT_NEAR(wl1::discrete_inner_product(ps, ones, ones), 1.0, 1e-15);
  EXPECT_EQ(wl1::discrete_inner_product(ps, phi2, zeros), 0.0);
  std::vector<wl1::Complex> f{{1.0, 1.0}, {0.0, 2.0}}, g{{0.0, 1.0}, {1.0, 0.0}};
  const wl1::Complex ip = wl1::discrete_inner_product(ps, f, g);
  EXPECT_NEAR(std::abs(ip - (0.5 * f[0] * std::conj(g[0]) + 0.5 * f[1] * std::conj(g[1]))), 0.0, 1e-15);
}

TEST(Grid, TauSumsToOneAndMatchesCellMeasure) {
  std::mt19937_64 rng(2024);
  const Basis bases[] = {Basis::legendre(), Basis::chebyshev(), Basis::jacobi(1.0, 0.5),
                         Basis::jacobi(-0.5, 1.0), Basis::jacobi(-0.7, -0.3), Basis::fourier()};
  for (const Basis& b : bases) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = random_sorted(rng, 1 + trial * 7);
      const PointSet ps = PointSet::build(p, b);
      double total = 0.0;
      for (double t : ps.tau()) {
        EXPECT_GE(t, 0.0);
        total += t;
      }
      EXPECT_NEAR(total, 1.0, 1e-12) << b.name();
      // Cells partition [-1, 1] and contain their node.
      EXPECT_EQ(ps.cells().front().lo, -1.0);
      EXPECT_EQ(ps.cells().back().hi, 1.0);
      for (Index n = 0; n < ps.size(); ++n) {
        EXPECT_LE(ps.cells()[n].lo, ps.points()[n]);
        EXPECT_GE(ps.cells()[n].hi, ps.points()[n]);
        if (n + 1 < ps.size()) EXPECT_EQ(ps.cells()[n].hi, ps.cells()[n + 1].lo);
      }
      EXPECT_DOUBLE_EQ(ps.h(), brute_h(p));
      if (b.is_jacobi() && b.alpha() >= -0.5 && b.beta() >= -0.5) {
        for (Index n = 0; n < ps.size(); ++n) {
          const double want = oracle::jacobi_measure(b.alpha(), b.beta(), ps.cells()[n].lo, ps.cells()[n].hi);
          EXPECT_NEAR(ps.tau()[n], want, 1e-12);
        }
      }
    }
  }
}

TEST(Grid, EquispacedFillDistance) {
  for (int n : {5, 11, 40}) {
    const auto eq = wl1::generate_points({GridKind::Equispaced, 1.0}, n, 1);
    const PointSet ps = PointSet::build(eq, Basis::legendre(), GhostRule::Jacobi);
    EXPECT_NEAR(ps.h(), 1.0 / (n - 1), 1e-15);
    EXPECT_TRUE(ps.degenerate());
    std::vector<double> mid(n);
    for (int i = 0; i < n; ++i) mid[i] = -1.0 + (2.0 * i + 1.0) / n;
    const PointSet pm = PointSet::build(mid, Basis::legendre(), GhostRule::Jacobi);
    EXPECT_NEAR(pm.h(), 1.0 / n, 1e-15);
    EXPECT_NEAR(pm.xi(), 1.0 / n, 1e-15);
  }
}

TEST(Grid, InnerProductNonnegative) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_sorted(rng, 12);
    const PointSet ps = PointSet::build(p, Basis::chebyshev());
    std::vector<double> f(p.size());
    for (double& v : f) v = normal(rng);
    EXPECT_GE(wl1::discrete_inner_product(ps, f, f), 0.0);
  }
}

TEST(Grid, DiscreteGramConvergesUnderRefinement) {
  const Basis leg = Basis::legendre();
  double previous = -1.0, first = 0.0;
  for (int n : {20, 40, 80, 160}) {
    const PointSet ps = PointSet::build(wl1::generate_points({GridKind::Equispaced, 1.0}, n, 1), leg);
    double dev = 0.0;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        std::vector<double> fi(n), fj(n);
        for (int k = 0; k < n; ++k) {
          fi[k] = leg.eval_real(i, ps.points()[k]);
          fj[k] = leg.eval_real(j, ps.points()[k]);
        }
        dev = std::max(dev, std::abs(wl1::discrete_inner_product(ps, fi, fj) - (i == j ? 1.0 : 0.0)));
      }
    }
    if (previous < 0) first = dev;
    else EXPECT_LE(dev, 2.0 * previous);
    previous = dev;
  }
  EXPECT_LT(previous, 0.25 * first);
}

TEST(Grid, PointFileRoundTrip) {
  const std::vector<double> p{-0.9, -0.1234567890123456789, 0.5, 1.0};
  std::stringstream io;
  wl1::write_points(io, p);
  EXPECT_EQ(wl1::read_points(io), p);
  std::stringstream bad("0.1\nabc\n");
  EXPECT_EQ(kind_of([&] { wl1::read_points(bad); }), ErrorKind::Data);
  EXPECT_EQ(kind_of([] { wl1::read_points_file("/nonexistent/points.txt"); }), ErrorKind::Io);
}
