#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton on the recurrence.
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
  std::vector<std::pair<double, double>> rule(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  return rule;
}

// Composite Gauss-Legendre with `panels` equal panels of `order` nodes.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int panels = 64, int order = 20) {
  static thread_local std::vector<std::pair<double, double>> rule;
  if (static_cast<int>(rule.size()) != order) rule = gauss_legendre(order);
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (const auto& [x, w] : rule) sum += w * f(lo + 0.5 * width * (x + 1.0));
  }
  return 0.5 * width * sum;
}

// Unnormalised Jacobi weight transported to theta in [0, pi] by t = cos(theta):
// (1-t)^a (1+t)^b dt = 2^(a+b) sin^(2a)(theta/2) cos^(2b)(theta/2) sin(theta) dtheta.
// The result is smooth in theta for a, b >= -1/2.
inline double jacobi_theta_weight(double a, double b, double theta) {
  const double s = std::sin(0.5 * theta), c = std::cos(0.5 * theta);
  return std::pow(2.0, a + b) * std::pow(s, 2.0 * a) * std::pow(c, 2.0 * b) * 2.0 * s * c;
}

// Measure of [lo, hi] under the normalised Jacobi(a, b) probability measure.
inline double jacobi_measure(double a, double b, double lo, double hi, int panels = 200) {
  auto w = [&](double th) { return jacobi_theta_weight(a, b, th); };
  const double total = integrate(w, 0.0, std::numbers::pi, panels);
  return integrate(w, std::acos(std::min(1.0, hi)), std::acos(std::max(-1.0, lo)), panels) / total;
}

}  // namespace oracle
