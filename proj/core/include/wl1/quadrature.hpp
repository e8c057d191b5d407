#pragma once

#include <vector>

namespace wl1 {

/// Gauss rule for a probability measure: sum_k weights[k] g(nodes[k])
/// approximates the integral of g against the measure. Nodes ascend.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Jacobi rule for the normalized weight
/// c (1-t)^alpha (1+t)^beta. Exact for polynomials of degree 2n-1.
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

/// Gauss-Legendre rule on [lo, hi] for the plain Lebesgue measure.
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

}  // namespace wl1
