#include "wl1/basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "wl1/error.hpp"
#include "wl1/quadrature.hpp"

namespace wl1 {
namespace {

constexpr double kPi = std::numbers::pi;

// exp(i pi j t) with the argument j*t reduced modulo 2 before scaling by pi,
// so that nodes with j t in 2Z give exactly 1.
Complex fourier_value(long j, double t) {
  const double jd = static_cast<double>(j);
  const double u = jd * t;
  // fma recovers the rounding error of the product exactly.
  const double r = (u - 2.0 * std::nearbyint(0.5 * u)) + std::fma(jd, t, -u);
  return {std::cos(kPi * r), std::sin(kPi * r)};
}

double log_kappa0(double a, double b) {
  return (a + b + 1.0) * std::numbers::ln2 + std::lgamma(a + 1.0) +
         std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0);
}

// Squared scale factors kappa_0 / kappa_n for n < count.
void fill_scale_sq(double a, double b, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() < 2) return;
  out[1] = std::exp(log_kappa0(a, b) - jacobi_log_kappa(a, b, 1));
  const double s = a + b;
  for (std::size_t n = 2; n < out.size(); ++n) {
    const double dn = static_cast<double>(n);
    const double ratio = (2.0 * dn + s - 1.0) / (2.0 * dn + s + 1.0) *
                         (dn + a) * (dn + b) / (dn * (dn + s));
    out[n] = out[n - 1] / ratio;
  }
}

}  // namespace

double jacobi_log_kappa(double alpha, double beta, long j) {
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw Error(ErrorKind::Domain, "Jacobi parameters must exceed -1");
  }
  if (j < 0) throw Error(ErrorKind::Domain, "negative Jacobi degree");
  if (j == 0) return log_kappa0(alpha, beta);
  const double dj = static_cast<double>(j);
  const double s = alpha + beta;
  return (s + 1.0) * std::numbers::ln2 - std::log(2.0 * dj + s + 1.0) +
         std::lgamma(dj + alpha + 1.0) + std::lgamma(dj + beta + 1.0) -
         std::lgamma(dj + 1.0) - std::lgamma(dj + s + 1.0);
}

double jacobi_kappa(double alpha, double beta, long j) {
  return std::exp(jacobi_log_kappa(alpha, beta, j));
}

double jacobi_polynomial(double a, double b, long n, double t) {
  if (n < 0) return 0.0;
  if (n == 0) return 1.0;
  const double s = a + b;
  double p_prev = 1.0;
  double p = 0.5 * ((s + 2.0) * t + (a - b));
  for (long k = 2; k <= n; ++k) {
    const double dk = static_cast<double>(k);
    const double c1 = 2.0 * dk * (dk + s) * (2.0 * dk + s - 2.0);
    const double c2 = (2.0 * dk + s - 1.0) *
                      ((2.0 * dk + s) * (2.0 * dk + s - 2.0) * t + a * a - b * b);
    const double c3 = 2.0 * (dk + a - 1.0) * (dk + b - 1.0) * (2.0 * dk + s);
    const double p_next = (c2 * p - c3 * p_prev) / c1;
    p_prev = p;
    p = p_next;
  }
  return p;
}

double jacobi_polynomial_deriv(double a, double b, long n, double t) {
  if (n <= 0) return 0.0;
  return 0.5 * (static_cast<double>(n) + a + b + 1.0) *
         jacobi_polynomial(a + 1.0, b + 1.0, n - 1, t);
}

Basis Basis::jacobi(double alpha, double beta) {
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw Error(ErrorKind::Domain, "Jacobi parameters must exceed -1");
  }
  return Basis(BasisKind::Jacobi, alpha, beta);
}

Basis Basis::fourier() { return Basis(BasisKind::Fourier, 0.0, 0.0); }

Basis Basis::parse(std::string_view text) {
  if (text == "fourier") return fourier();
  if (text == "legendre") return legendre();
  if (text == "chebyshev") return chebyshev();
  constexpr std::string_view prefix = "jacobi:";
  if (text.starts_with(prefix)) {
    const std::string body(text.substr(prefix.size()));
    const auto comma = body.find(',');
    if (comma != std::string::npos) {
      try {
        std::size_t used_a = 0, used_b = 0;
        const std::string sa = body.substr(0, comma);
        const std::string sb = body.substr(comma + 1);
        const double a = std::stod(sa, &used_a);
        const double b = std::stod(sb, &used_b);
        if (used_a == sa.size() && used_b == sb.size()) return jacobi(a, b);
      } catch (const std::logic_error&) {
      }
    }
  }
  throw Error(ErrorKind::Domain, "cannot parse basis '" + std::string(text) + "'");
}

double Basis::growth_exponent() const noexcept {
  if (kind_ == BasisKind::Fourier) return -0.5;
  return std::max({alpha_, beta_, -0.5});
}

long Basis::frequency(Index k) const {
  check_index(k);
  if (kind_ == BasisKind::Jacobi) return static_cast<long>(k);
  if (k == 0) return 0;
  return (k % 2 == 1) ? -static_cast<long>((k + 1) / 2) : static_cast<long>(k / 2);
}

Index Basis::storage_index(long freq) const {
  if (kind_ == BasisKind::Jacobi) {
    if (freq < 0) throw Error(ErrorKind::Domain, "negative polynomial degree");
    return static_cast<Index>(freq);
  }
  if (freq == 0) return 0;
  return freq < 0 ? static_cast<Index>(-2 * freq - 1) : static_cast<Index>(2 * freq);
}

void Basis::check_index(Index k) const {
  if (k < 0) throw Error(ErrorKind::Domain, "negative storage index");
}

void Basis::check_point(double t) const {
  if (!(t >= -1.0 && t <= 1.0)) {
    throw Error(ErrorKind::Domain, "evaluation point outside [-1, 1]");
  }
}

Complex Basis::eval(Index k, double t) const {
  check_index(k);
  check_point(t);
  if (kind_ == BasisKind::Fourier) return fourier_value(frequency(k), t);
  return {eval_real(k, t), 0.0};
}

double Basis::eval_real(Index k, double t) const {
  check_index(k);
  check_point(t);
  if (kind_ != BasisKind::Jacobi) {
    throw Error(ErrorKind::Unsupported, "eval_real on a complex basis");
  }
  const long n = static_cast<long>(k);
  const double scale =
      std::exp(0.5 * (log_kappa0(alpha_, beta_) - jacobi_log_kappa(alpha_, beta_, n)));
  return scale * jacobi_polynomial(alpha_, beta_, n, t);
}

Complex Basis::eval_deriv(Index k, double t, int order) const {
  check_index(k);
  check_point(t);
  if (order < 0 || order > 2) {
    throw Error(ErrorKind::Unsupported, "derivative order must be 0, 1 or 2");
  }
  if (order == 0) return eval(k, t);
  if (kind_ == BasisKind::Fourier) {
    const long j = frequency(k);
    const Complex factor(0.0, kPi * static_cast<double>(j));
    return (order == 1 ? factor : factor * factor) * fourier_value(j, t);
  }
  const long n = static_cast<long>(k);
  if (n < order) return {0.0, 0.0};
  const double s = alpha_ + beta_;
  const double dn = static_cast<double>(n);
  const double scale =
      std::exp(0.5 * (log_kappa0(alpha_, beta_) - jacobi_log_kappa(alpha_, beta_, n)));
  double value = 0.0;
  if (order == 1) {
    value = 0.5 * (dn + s + 1.0) * jacobi_polynomial(alpha_ + 1.0, beta_ + 1.0, n - 1, t);
  } else {
    value = 0.25 * (dn + s + 1.0) * (dn + s + 2.0) *
            jacobi_polynomial(alpha_ + 2.0, beta_ + 2.0, n - 2, t);
  }
  return {scale * value, 0.0};
}

void Basis::eval_all(double t, std::span<double> out) const {
  check_point(t);
  if (kind_ != BasisKind::Jacobi) {
    throw Error(ErrorKind::Unsupported, "real evaluation of a complex basis");
  }
  const std::size_t count = out.size();
  if (count == 0) return;
  std::vector<double> scale_sq(count);
  fill_scale_sq(alpha_, beta_, scale_sq);
  const double a = alpha_, b = beta_, s = alpha_ + beta_;
  double p_prev = 1.0;
  double p = 0.5 * ((s + 2.0) * t + (a - b));
  out[0] = 1.0;
  if (count > 1) out[1] = p * std::sqrt(scale_sq[1]);
  for (std::size_t k = 2; k < count; ++k) {
    const double dk = static_cast<double>(k);
    const double c1 = 2.0 * dk * (dk + s) * (2.0 * dk + s - 2.0);
    const double c2 = (2.0 * dk + s - 1.0) *
                      ((2.0 * dk + s) * (2.0 * dk + s - 2.0) * t + a * a - b * b);
    const double c3 = 2.0 * (dk + a - 1.0) * (dk + b - 1.0) * (2.0 * dk + s);
    const double p_next = (c2 * p - c3 * p_prev) / c1;
    p_prev = p;
    p = p_next;
    out[k] = p * std::sqrt(scale_sq[k]);
  }
}

void Basis::eval_all(double t, std::span<Complex> out) const {
  check_point(t);
  if (kind_ == BasisKind::Fourier) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = fourier_value(frequency(static_cast<Index>(k)), t);
    }
    return;
  }
  std::vector<double> values(out.size());
  eval_all(t, values);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {values[k], 0.0};
}

double Basis::linf_norm(Index k) const {
  check_index(k);
  if (kind_ == BasisKind::Fourier) return 1.0;
  const long n = static_cast<long>(k);
  if (n == 0) return 1.0;
  const double log_scale =
      0.5 * (log_kappa0(alpha_, beta_) - jacobi_log_kappa(alpha_, beta_, n));
  const double dn = static_cast<double>(n);
  if (std::max(alpha_, beta_) >= -0.5) {
    // |P_n(1)| = binom(n+alpha, n), |P_n(-1)| = binom(n+beta, n).
    const double at_plus = std::lgamma(dn + alpha_ + 1.0) - std::lgamma(dn + 1.0) -
                           std::lgamma(alpha_ + 1.0);
    const double at_minus = std::lgamma(dn + beta_ + 1.0) - std::lgamma(dn + 1.0) -
                            std::lgamma(beta_ + 1.0);
    return std::exp(std::max(at_plus, at_minus) + log_scale);
  }
  // Interior maximum: dense Chebyshev sampling plus golden-section refinement.
  constexpr int kSamples = 4096;
  auto value = [&](double t) { return std::abs(jacobi_polynomial(alpha_, beta_, n, t)); };
  std::vector<double> grid(kSamples + 2);
  grid[0] = -1.0;
  for (int i = 0; i < kSamples; ++i) {
    grid[i + 1] = -std::cos(kPi * (i + 0.5) / kSamples);
  }
  grid[kSamples + 1] = 1.0;
  std::size_t best = 0;
  double best_value = value(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = value(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  while (hi - lo > 1e-10) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = value(x2);
    }
  }
  best_value = std::max({best_value, f1, f2});
  return best_value * std::exp(log_scale);
}

double Basis::density(double t) const {
  check_point(t);
  if (kind_ == BasisKind::Fourier) return 0.5;
  return std::exp(-log_kappa0(alpha_, beta_)) * std::pow(1.0 - t, alpha_) *
         std::pow(1.0 + t, beta_);
}

double Basis::cdf(double t) const {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (kind_ == BasisKind::Fourier || (alpha_ == 0.0 && beta_ == 0.0)) {
    return 0.5 * (t + 1.0);
  }
  return boost::math::ibeta(beta_ + 1.0, alpha_ + 1.0, 0.5 * (1.0 + t));
}

double Basis::measure(double a, double b) const {
  if (b <= a) return 0.0;
  a = std::max(a, -1.0);
  b = std::min(b, 1.0);
  if (kind_ == BasisKind::Fourier || (alpha_ == 0.0 && beta_ == 0.0)) {
    return 0.5 * (b - a);
  }
  if (a > 0.0) {
    // Upper tail form avoids cancellation near t = 1.
    const double qa = boost::math::ibetac(beta_ + 1.0, alpha_ + 1.0, 0.5 * (1.0 + a));
    const double qb =
        b >= 1.0 ? 0.0 : boost::math::ibetac(beta_ + 1.0, alpha_ + 1.0, 0.5 * (1.0 + b));
    return qa - qb;
  }
  return cdf(b) - cdf(a);
}

std::string Basis::name() const {
  if (kind_ == BasisKind::Fourier) return "fourier";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "jacobi:%g,%g", alpha_, beta_);
  return buffer;
}

Projection project_coefficients(const RealFunction& f, const Basis& basis, Index count,
                                double rel_tol, int max_nodes) {
  if (count < 1) throw Error(ErrorKind::Dimension, "projection needs count >= 1");
  int n = 64;
  while (n < 2 * count + 32) n *= 2;

  auto estimate = [&](int nodes) {
    const QuadratureRule rule = basis.is_jacobi()
                                    ? gauss_jacobi(nodes, basis.alpha(), basis.beta())
                                    : gauss_jacobi(nodes, 0.0, 0.0);
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(count);
    std::vector<Complex> values(static_cast<std::size_t>(count));
    for (int q = 0; q < nodes; ++q) {
      const double fq = f(rule.nodes[q]) * rule.weights[q];
      basis.eval_all(rule.nodes[q], values);
      for (Index k = 0; k < count; ++k) x(k) += fq * std::conj(values[k]);
    }
    return x;
  };

  Projection result;
  Eigen::VectorXcd previous = estimate(n);
  while (true) {
    const int next = 2 * n;
    if (next > max_nodes) {
      result.coefficients = previous;
      result.nodes = n;
      result.converged = false;
      return result;
    }
    Eigen::VectorXcd current = estimate(next);
    const double change = (current - previous).cwiseAbs().maxCoeff();
    const double size = std::max(current.cwiseAbs().maxCoeff(), 1e-300);
    n = next;
    result.last_change = change / size;
    if (change <= rel_tol * size) {
      result.coefficients = current;
      result.nodes = n;
      result.converged = true;
      return result;
    }
    previous = std::move(current);
  }
}

Eigen::MatrixXcd basis_matrix(const Basis& basis, std::span<const double> points,
                              Index count) {
  Eigen::MatrixXcd out(static_cast<Index>(points.size()), count);
  std::vector<Complex> row(static_cast<std::size_t>(count));
  for (std::size_t n = 0; n < points.size(); ++n) {
    basis.eval_all(points[n], row);
    for (Index k = 0; k < count; ++k) out(static_cast<Index>(n), k) = row[k];
  }
  return out;
}

Eigen::MatrixXd basis_matrix_real(const Basis& basis, std::span<const double> points,
                                  Index count) {
  Eigen::MatrixXd out(static_cast<Index>(points.size()), count);
  std::vector<double> row(static_cast<std::size_t>(count));
  for (std::size_t n = 0; n < points.size(); ++n) {
    basis.eval_all(points[n], row);
    for (Index k = 0; k < count; ++k) out(static_cast<Index>(n), k) = row[k];
  }
  return out;
}

}  // namespace wl1
