#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct LpResult {
  bool feasible = false;
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x;
};

// Dense two-phase tableau simplex with Bland's rule for
//   min c^T x  subject to  A x = b, x >= 0.
inline LpResult simplex(Eigen::MatrixXd a, Eigen::VectorXd b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0) {
      a.row(i) *= -1.0;
      b(i) *= -1.0;
    }
  }
  // Columns: n structural, m artificial, then the right-hand side.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  t.block(0, 0, m, n) = a;
  t.block(0, n, m, m).setIdentity();
  t.block(0, n + m, m, 1) = b;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  const double tol = 1e-11;

  auto pivot = [&](int row, int col) {
    t.row(row) /= t(row, col);
    for (int i = 0; i <= m; ++i) {
      if (i != row && t(i, col) != 0.0) t.row(i) -= t(i, col) * t.row(row);
    }
    basis[row] = col;
  };
  auto optimize = [&](int allowed) {
    for (int guard = 0; guard < 100000; ++guard) {
      int col = -1;
      for (int j = 0; j < allowed; ++j) {
        if (t(m, j) < -tol) {
          col = j;
          break;
        }
      }
      if (col < 0) return true;
      int row = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t(i, col) > tol) {
          const double ratio = t(i, n + m) / t(i, col);
          if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && row >= 0 && basis[i] < basis[row])) {
            best = ratio;
            row = i;
          }
        }
      }
      if (row < 0) return false;  // unbounded
      pivot(row, col);
    }
    return false;
  };

  // Phase one: minimise the sum of artificials.
  t.row(m).setZero();
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (int i = 0; i < m; ++i) t(m, n + i) = 0.0;
  optimize(n + m);
  LpResult out;
  const double infeas = -t(m, n + m);
  if (infeas > 1e-9 * (1.0 + b.norm())) return out;
  // Drive remaining artificials out of the basis.
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) {
      for (int j = 0; j < n; ++j) {
        if (std::abs(t(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }
  // Phase two on structural columns only.
  t.row(m).setZero();
  t.block(m, 0, 1, n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n && c(basis[i]) != 0.0) t.row(m) -= c(basis[i]) * t.row(i);
  }
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) t.row(i).segment(n, m).setZero();
  }
  if (!optimize(n)) return out;
  out.feasible = true;
  out.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) out.x(basis[i]) = t(i, n + m);
  }
  out.value = c.dot(out.x);
  return out;
}

// min sum_i w_i |z_i| s.t. A z = y, as an LP in z = p - q with p, q >= 0.
inline LpResult weighted_l1_equality(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& w) {
  const Eigen::Index k = a.cols();
  Eigen::MatrixXd big(a.rows(), 2 * k);
  big << a, -a;
  Eigen::VectorXd c(2 * k);
  c << w, w;
  LpResult r = simplex(big, y, c);
  if (r.feasible) r.x = (r.x.head(k) - r.x.tail(k)).eval();
  return r;
}

}  // namespace oracle
