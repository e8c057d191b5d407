#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace wl1 {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using RealFunction = std::function<double(double)>;

enum class BasisKind { Jacobi, Fourier };

/// An orthonormal system on [-1, 1], orthonormal with respect to a
/// probability measure nu (integral of nu equals one).
///
/// Jacobi(alpha, beta): nu(t) = c (1-t)^alpha (1+t)^beta and
/// phi_{k}(t) = P_k^{(alpha,beta)}(t) / sqrt(c kappa_k), so Legendre gives
/// phi_k = sqrt(2k+1) P_k.
///
/// Fourier: nu = 1/2 and phi(t) = exp(i j pi t). Storage index k maps onto
/// frequencies in the nested order 0, -1, 1, -2, 2, ... so that the first K
/// columns always cover a balanced band (-K/2 .. K/2-1 for even K).
///
/// Storage indices are zero-based everywhere in this library; the
/// mathematical index used by weight formulas such as i^gamma is k + 1.
class Basis {
 public:
  static Basis jacobi(double alpha, double beta);
  static Basis legendre() { return jacobi(0.0, 0.0); }
  static Basis chebyshev() { return jacobi(-0.5, -0.5); }
  static Basis fourier();

  /// Parses "jacobi:a,b", "legendre", "chebyshev" or "fourier".
  static Basis parse(std::string_view text);

  BasisKind kind() const noexcept { return kind_; }
  bool is_jacobi() const noexcept { return kind_ == BasisKind::Jacobi; }
  bool is_fourier() const noexcept { return kind_ == BasisKind::Fourier; }
  /// True when every basis function is real valued.
  bool is_real() const noexcept { return kind_ == BasisKind::Jacobi; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  /// q = max(alpha, beta, -1/2); Fourier reports -1/2.
  double growth_exponent() const noexcept;

  /// Polynomial degree (Jacobi) or signed frequency (Fourier) of column k.
  long frequency(Index k) const;
  /// Inverse of frequency().
  Index storage_index(long frequency) const;

  Complex eval(Index k, double t) const;
  /// Jacobi only.
  double eval_real(Index k, double t) const;
  /// Derivative of order 0, 1 or 2.
  Complex eval_deriv(Index k, double t, int order) const;

  /// Values of the first out.size() basis functions at t (Jacobi only).
  void eval_all(double t, std::span<double> out) const;
  void eval_all(double t, std::span<Complex> out) const;

  /// Uniform norm of phi_k on [-1, 1].
  double linf_norm(Index k) const;

  double density(double t) const;
  /// Measure of [-1, t].
  double cdf(double t) const;
  /// Measure of [a, b].
  double measure(double a, double b) const;

  std::string name() const;

  friend bool operator==(const Basis& a, const Basis& b) {
    return a.kind_ == b.kind_ && a.alpha_ == b.alpha_ && a.beta_ == b.beta_;
  }

 private:
  Basis(BasisKind kind, double alpha, double beta)
      : kind_(kind), alpha_(alpha), beta_(beta) {}

  void check_index(Index k) const;
  void check_point(double t) const;

  BasisKind kind_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

/// Norm constant of the unnormalized Jacobi weight (1-t)^a (1+t)^b:
/// integral of (P_j)^2 (1-t)^a (1+t)^b over [-1, 1]. Computed in log space.
double jacobi_kappa(double alpha, double beta, long j);
double jacobi_log_kappa(double alpha, double beta, long j);

/// Classical (unnormalized) Jacobi polynomial P_n^{(alpha,beta)}(t) by the
/// three-term recurrence.
double jacobi_polynomial(double alpha, double beta, long n, double t);

/// d/dt P_n^{(alpha,beta)} = (n+alpha+beta+1)/2 P_{n-1}^{(alpha+1,beta+1)}.
double jacobi_polynomial_deriv(double alpha, double beta, long n, double t);

/// Coefficients <f, phi_k> in L^2_nu for k < count, by Gauss quadrature
/// refined until successive estimates agree.
struct Projection {
  Eigen::VectorXcd coefficients;
  int nodes = 0;
  bool converged = false;
  double last_change = 0.0;
};

Projection project_coefficients(const RealFunction& f, const Basis& basis,
                                Index count, double rel_tol = 1e-12,
                                int max_nodes = 16384);

/// Values of phi_k(t_n) for all grid points and k < count, one row per point.
Eigen::MatrixXcd basis_matrix(const Basis& basis, std::span<const double> points,
                              Index count);
Eigen::MatrixXd basis_matrix_real(const Basis& basis,
                                  std::span<const double> points, Index count);

}  // namespace wl1
