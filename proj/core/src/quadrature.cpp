#include "wl1/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "wl1/error.hpp"

namespace wl1 {
namespace {

// Recurrence coefficients of the orthonormal Jacobi polynomials for the
// probability-normalized weight: t p_k = a_{k+1} p_{k+1} + b_k p_k + a_k p_{k-1}.
double diag_coeff(int k, double a, double b) {
  const double s = a + b;
  if (k == 0) return (b - a) / (s + 2.0);
  return (b * b - a * a) / ((2.0 * k + s) * (2.0 * k + s + 2.0));
}

double offdiag_coeff(int k, double a, double b) {
  const double s = a + b;
  if (k == 1) {
    return std::sqrt(4.0 * (1.0 + a) * (1.0 + b) /
                     ((2.0 + s) * (2.0 + s) * (3.0 + s)));
  }
  const double two_k_s = 2.0 * k + s;
  return std::sqrt(4.0 * k * (k + a) * (k + b) * (k + s) /
                   (two_k_s * two_k_s * (two_k_s + 1.0) * (two_k_s - 1.0)));
}

QuadratureRule compute_gauss_jacobi(int n, double alpha, double beta) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = diag_coeff(k, alpha, beta);
  for (int k = 1; k < n; ++k) sub(k - 1) = offdiag_coeff(k, alpha, beta);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::Numerical, "Golub-Welsch eigenvalue solve failed");
  }

  std::vector<double> bcoef(n), acoef(n + 1, 0.0);
  for (int k = 0; k < n; ++k) bcoef[k] = diag(k);
  for (int k = 1; k <= n; ++k) acoef[k] = offdiag_coeff(k, alpha, beta);

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::clamp(eig.eigenvalues()(i), -1.0, 1.0);
    // Newton polish on p_n.
    for (int it = 0; it < 4; ++it) {
      double p_prev = 0.0, p = 1.0, d_prev = 0.0, d = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p_next = ((x - bcoef[k]) * p - acoef[k] * p_prev) / acoef[k + 1];
        const double d_next =
            (p + (x - bcoef[k]) * d - acoef[k] * d_prev) / acoef[k + 1];
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
      }
      if (d == 0.0 || !std::isfinite(d)) break;
      const double step = p / d;
      const double next = x - step;
      if (!(next > -1.0 && next < 1.0)) break;
      x = next;
      if (std::abs(step) < 1e-16) break;
    }
    // Christoffel weight 1 / sum_j p_j(x)^2.
    double p_prev = 0.0, p = 1.0, sum = 1.0;
    for (int k = 0; k + 1 < n; ++k) {
      const double p_next = ((x - bcoef[k]) * p - acoef[k] * p_prev) / acoef[k + 1];
      p_prev = p;
      p = p_next;
      sum += p * p;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / sum;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw Error(ErrorKind::Dimension, "quadrature needs n >= 1");
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw Error(ErrorKind::Domain, "Jacobi parameters must exceed -1");
  }
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, QuadratureRule> cache;
  const auto key = std::make_tuple(n, alpha, beta);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  QuadratureRule rule = compute_gauss_jacobi(n, alpha, beta);
  std::lock_guard<std::mutex> lock(mutex);
  if (cache.size() > 64) cache.clear();
  cache.emplace(key, rule);
  return rule;
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  QuadratureRule rule = gauss_jacobi(n, 0.0, 0.0);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = mid + half * rule.nodes[k];
    rule.weights[k] *= (hi - lo);
  }
  return rule;
}

}  // namespace wl1
