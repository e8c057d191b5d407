#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wl1/basis.hpp"
#include "wl1/grid.hpp"
#include "wl1/sampling.hpp"

namespace wl1 {

struct GramDeviation {
  double E2 = 0.0;    // spectral norm of I - G
  double Einf = 0.0;  // max row sum of I - G
  double E() const noexcept { return E2 > Einf ? E2 : Einf; }
};

/// G = (U P_M)* (U P_M) from the first M columns of `u`.
GramDeviation compute_E(const Eigen::MatrixXcd& u, Index m);

/// Max row sum over rows R+1..K of W^{-1} U* U P_M (zero-based rows R..K-1).
/// Requires M <= R < K.
double compute_F(const Eigen::MatrixXcd& u, const Eigen::VectorXd& w, Index m, Index r);

struct Certificate {
  double alpha = 0.0;
  double theta = 0.0;
  bool invertible = false;
  bool satisfied = false;
  /// u = W^{-1} U* U P_D A^{-1} W P_D sgn, all K entries.
  Eigen::VectorXcd u;
};

/// `support` holds distinct storage indices < K and `signs` one unit-modulus
/// value per support index.
Certificate check_dual_certificate(const Eigen::MatrixXcd& u, const Eigen::VectorXd& w,
                                   const std::vector<Index>& support,
                                   const Eigen::VectorXcd& signs);

struct TruncationBound {
  double value = 0.0;
  double sigma = 0.0;
  /// ||x - P_K x||_{1,w} (or with w-tilde in w-tilde mode).
  double tail = 0.0;
  bool bounded = true;
};

/// `tail` holds coefficients x_K, x_{K+1}, ... (zero-based storage K onward)
/// and `w` the weights for all K + tail.size() indices. In w-tilde mode the
/// second term uses w-tilde_i = sqrt(i) w_i^2 with i = k + 1.
TruncationBound truncation_bound(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& tail,
                                 const Eigen::VectorXd& w, bool wtilde_mode);

struct NmrCheck {
  bool e_m = false;
  bool e_r = false;
  bool f = false;
  bool passed() const noexcept { return e_m && e_r && f; }
};

/// The three inequalities E(h,M) < eps, E(h,R) < eps min_{M<i<=R} w_i /
/// max_{i<=M} w_i and F(h,M,R) <= eps / max_{i<=M} w_i, evaluated on `u`.
NmrCheck nmr_condition(const Eigen::MatrixXcd& u, const Eigen::VectorXd& w, Index m,
                       Index r, double epsilon);

struct DiagnosticsReport {
  double h = 0.0;
  double xi = 0.0;
  Index N = 0;
  Index M = 0;
  Index R = 0;
  Index K = 0;
  double E2 = 0.0;
  double Einf = 0.0;
  double F = 0.0;
  double sigma_min = 0.0;
  double alpha = 0.0;
  double theta = 0.0;
  double trunc_w = 0.0;
  double trunc_wtilde = 0.0;
};

/// Fixed CSV column order.
const std::vector<std::string>& report_columns();
std::vector<double> report_values(const DiagnosticsReport& report);
void write_reports_csv(std::ostream& out, const std::vector<DiagnosticsReport>& reports);

struct ReportOptions {
  Index M = 8;
  Index R = 0;       // 0 selects 2M
  Index K = 0;       // 0 selects 4N
  Index K_diag = 0;  // 0 selects max(2R, K)
  WeightScheme scheme = WeightScheme::PolyGamma;
  double gamma = 1.0;
  /// Coefficients used for the truncation bounds; empty skips them.
  RealFunction f;
  Index tail_length = 0;  // 0 selects 4K
};

/// E, F and the certificate for D = {0..M-1} use U P_{K_diag}; the signs
/// pattern is that of the projection coefficients of f (all ones when f is
/// empty). sigma_min is the smallest nonzero singular value of U P_K.
DiagnosticsReport build_report(const Basis& basis, const PointSet& ps,
                               const ReportOptions& options);

struct ScalingRow {
  Index N = 0;
  double h = 0.0;
  Index M = 0;
  double E2 = 0.0;
  double Einf = 0.0;
  double F = 0.0;
  /// h M^2 <= 1 (Jacobi) or h M <= 1 (Fourier).
  bool admissible = true;
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  /// Least-squares slopes of log E against log h over admissible rows.
  double slope_E2 = 0.0;
  double slope_Einf = 0.0;
  double slope_F = 0.0;
  Index fitted_rows = 0;
};

/// One row per N. F uses R = 2M, K_diag = 4M and weights i ||phi_i||_inf.
ScalingStudy scaling_study(const Basis& basis, const GridSpec& grid, Index m,
                           const std::vector<Index>& n_values, std::uint64_t seed = 1);

/// Ordinary least-squares slope of y against x. Needs two or more points.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wl1
