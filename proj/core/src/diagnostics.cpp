#include "wl1/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "wl1/error.hpp"
#include "wl1/table.hpp"

namespace wl1 {

namespace {

double hermitian_norm(const Eigen::MatrixXcd& d) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(d, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::Numerical, "eigenvalue iteration did not converge");
  }
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double max_row_sum(const Eigen::MatrixXcd& m) {
  return m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

GramDeviation compute_E(const Eigen::MatrixXcd& u, Index m) {
  if (m < 1 || m > u.cols()) throw Error(ErrorKind::Dimension, "M must lie in 1..K");
  const auto block = u.leftCols(m);
  const Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(m, m) - block.adjoint() * block;
  return GramDeviation{hermitian_norm(d), max_row_sum(d)};
}

double compute_F(const Eigen::MatrixXcd& u, const Eigen::VectorXd& w, Index m, Index r) {
  const Index k = u.cols();
  if (w.size() < k) throw Error(ErrorKind::Dimension, "weights shorter than K");
  if (m < 1 || m > r) throw Error(ErrorKind::Dimension, "F needs 1 <= M <= R");
  if (r >= k) throw Error(ErrorKind::Empty, "F needs R < K (empty row block)");
  Eigen::MatrixXcd block = u.rightCols(k - r).adjoint() * u.leftCols(m);
  block = w.segment(r, k - r).cwiseInverse().asDiagonal() * block;
  return max_row_sum(block);
}

Certificate check_dual_certificate(const Eigen::MatrixXcd& u, const Eigen::VectorXd& w,
                                   const std::vector<Index>& support,
                                   const Eigen::VectorXcd& signs) {
  const Index k = u.cols();
  if (w.size() < k) throw Error(ErrorKind::Dimension, "weights shorter than K");
  if (support.empty()) throw Error(ErrorKind::Empty, "empty support");
  if (static_cast<Index>(support.size()) != signs.size()) {
    throw Error(ErrorKind::Dimension, "one sign per support index required");
  }
  std::vector<bool> in_support(static_cast<std::size_t>(k), false);
  const Index s = static_cast<Index>(support.size());
  Eigen::MatrixXcd ud(u.rows(), s);
  Eigen::VectorXcd wsgn(s);
  for (Index j = 0; j < s; ++j) {
    const Index i = support[static_cast<std::size_t>(j)];
    if (i < 0 || i >= k || in_support[static_cast<std::size_t>(i)]) {
      throw Error(ErrorKind::Domain, "support indices must be distinct and below K");
    }
    in_support[static_cast<std::size_t>(i)] = true;
    ud.col(j) = u.col(i);
    wsgn(j) = w(i) * signs(j);
  }

  Certificate cert;
  const Eigen::MatrixXcd a = ud.adjoint() * ud;
  cert.alpha = hermitian_norm(a - Eigen::MatrixXcd::Identity(s, s));
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  cert.invertible = cert.alpha < 1.0 && lu.isInvertible();
  if (!cert.invertible) {
    cert.theta = std::numeric_limits<double>::infinity();
    return cert;
  }
  cert.u = w.head(k).cwiseInverse().asDiagonal() * (u.adjoint() * (ud * lu.solve(wsgn)));
  cert.theta = 0.0;
  for (Index i = 0; i < k; ++i) {
    if (!in_support[static_cast<std::size_t>(i)]) cert.theta = std::max(cert.theta, std::abs(cert.u(i)));
  }
  cert.satisfied = cert.alpha < 1.0 && cert.theta < 1.0;
  return cert;
}

TruncationBound truncation_bound(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& tail,
                                 const Eigen::VectorXd& w, bool wtilde_mode) {
  const Index k = u.cols();
  if (w.size() < k + tail.size()) {
    throw Error(ErrorKind::Dimension, "weights must cover K plus the tail");
  }
  TruncationBound bound;
  double tail_w = 0.0, tail_wt = 0.0;
  for (Index j = 0; j < tail.size(); ++j) {
    const double wi = w(k + j);
    const double i = static_cast<double>(k + j + 1);
    tail_w += wi * std::abs(tail(j));
    tail_wt += std::sqrt(i) * wi * wi * std::abs(tail(j));
  }
  bound.tail = wtilde_mode ? tail_wt : tail_w;
  if (tail_w == 0.0) return bound;
  bound.sigma = smallest_nonzero_singular_value(u).sigma;
  if (!(bound.sigma > 0.0)) {
    bound.bounded = false;
    bound.value = std::numeric_limits<double>::infinity();
    return bound;
  }
  bound.value = wtilde_mode ? tail_w + tail_wt / bound.sigma
                            : tail_w + w.head(k).norm() / bound.sigma * tail_w;
  return bound;
}

NmrCheck nmr_condition(const Eigen::MatrixXcd& u, const Eigen::VectorXd& w, Index m,
                       Index r, double epsilon) {
  if (!(m < r)) throw Error(ErrorKind::Dimension, "NMR condition needs M < R");
  const double w_head = w.head(m).maxCoeff();
  const double w_mid = w.segment(m, r - m).minCoeff();
  NmrCheck check;
  check.e_m = compute_E(u, m).E() < epsilon;
  check.e_r = compute_E(u, r).E() < epsilon * w_mid / w_head;
  check.f = compute_F(u, w, m, r) <= epsilon / w_head;
  return check;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> columns = {
      "h", "xi", "N", "M", "R", "K", "E2", "Einf", "F", "sigma_min",
      "alpha", "theta", "trunc_w", "trunc_wtilde"};
  return columns;
}

std::vector<double> report_values(const DiagnosticsReport& r) {
  return {r.h,
          r.xi,
          static_cast<double>(r.N),
          static_cast<double>(r.M),
          static_cast<double>(r.R),
          static_cast<double>(r.K),
          r.E2,
          r.Einf,
          r.F,
          r.sigma_min,
          r.alpha,
          r.theta,
          r.trunc_w,
          r.trunc_wtilde};
}

void write_reports_csv(std::ostream& out, const std::vector<DiagnosticsReport>& reports) {
  CsvWriter csv(out, report_columns());
  for (const auto& r : reports) csv.row(report_values(r));
}

DiagnosticsReport build_report(const Basis& basis, const PointSet& ps,
                               const ReportOptions& options) {
  DiagnosticsReport rep;
  rep.h = ps.h();
  rep.xi = ps.xi();
  rep.N = ps.size();
  rep.M = options.M;
  rep.R = options.R > 0 ? options.R : 2 * options.M;
  rep.K = options.K > 0 ? options.K : 4 * rep.N;
  if (rep.M < 1 || rep.M > rep.R) throw Error(ErrorKind::Dimension, "need 1 <= M <= R");
  const Index k_diag = options.K_diag > 0 ? options.K_diag : std::max(2 * rep.R, rep.K);
  if (k_diag <= rep.R || k_diag < rep.K) {
    throw Error(ErrorKind::Dimension, "K_diag must exceed R and cover K");
  }

  const Eigen::MatrixXcd u = SamplingMatrix::build(basis, ps, k_diag).entries();
  const WeightVector w = make_weights(basis, k_diag, options.scheme, options.gamma);
  const GramDeviation e = compute_E(u, rep.M);
  rep.E2 = e.E2;
  rep.Einf = e.Einf;
  rep.F = compute_F(u, w.w, rep.M, rep.R);
  rep.sigma_min = smallest_nonzero_singular_value(u.leftCols(rep.K)).sigma;

  Eigen::VectorXcd signs = Eigen::VectorXcd::Ones(rep.M);
  const Index tail_len = options.tail_length > 0 ? options.tail_length : 4 * rep.K;
  Eigen::VectorXcd coeffs;
  if (options.f) {
    coeffs = project_coefficients(options.f, basis, rep.K + tail_len).coefficients;
    for (Index i = 0; i < rep.M; ++i) {
      const double mag = std::abs(coeffs(i));
      if (mag > 0.0) signs(i) = coeffs(i) / mag;
    }
  }
  std::vector<Index> support(static_cast<std::size_t>(rep.M));
  for (Index i = 0; i < rep.M; ++i) support[static_cast<std::size_t>(i)] = i;
  const Certificate cert = check_dual_certificate(u, w.w, support, signs);
  rep.alpha = cert.alpha;
  rep.theta = cert.theta;

  if (options.f) {
    const WeightVector wt = make_weights(basis, rep.K + tail_len, options.scheme, options.gamma);
    const Eigen::VectorXcd tail = coeffs.segment(rep.K, tail_len);
    const Eigen::MatrixXcd uk = u.leftCols(rep.K);
    rep.trunc_w = truncation_bound(uk, tail, wt.w, false).value;
    rep.trunc_wtilde = truncation_bound(uk, tail, wt.w, true).value;
  }
  return rep;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::Dimension, "slope fit needs two or more paired values");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::Numerical, "slope fit with constant abscissa");
  return sxy / sxx;
}

ScalingStudy scaling_study(const Basis& basis, const GridSpec& grid, Index m,
                           const std::vector<Index>& n_values, std::uint64_t seed) {
  if (n_values.empty()) throw Error(ErrorKind::Empty, "no grid levels");
  ScalingStudy study;
  const Index r = 2 * m, k_diag = 4 * m;
  const WeightVector w = basis.is_fourier()
                             ? make_weights(basis, k_diag, WeightScheme::FourierGamma, 1.0)
                             : make_weights(basis, k_diag, WeightScheme::PolyGamma, 1.0);
  std::vector<double> lh, le2, leinf, lf;
  for (std::size_t level = 0; level < n_values.size(); ++level) {
    const PointSet ps =
        PointSet::build(generate_points(grid, n_values[level], seed + level), basis);
    const Eigen::MatrixXcd u = SamplingMatrix::build(basis, ps, k_diag).entries();
    ScalingRow row;
    row.N = ps.size();
    row.h = ps.h();
    row.M = m;
    const GramDeviation e = compute_E(u, m);
    row.E2 = e.E2;
    row.Einf = e.Einf;
    row.F = compute_F(u, w.w, m, r);
    const double md = static_cast<double>(m);
    row.admissible = basis.is_fourier() ? row.h * md <= 1.0 : row.h * md * md <= 1.0;
    study.rows.push_back(row);
    if (row.admissible && row.E2 > 0.0 && row.Einf > 0.0 && row.F > 0.0) {
      lh.push_back(std::log(row.h));
      le2.push_back(std::log(row.E2));
      leinf.push_back(std::log(row.Einf));
      lf.push_back(std::log(row.F));
    }
  }
  study.fitted_rows = static_cast<Index>(lh.size());
  if (lh.size() >= 2) {
    study.slope_E2 = fit_slope(lh, le2);
    study.slope_Einf = fit_slope(lh, leinf);
    study.slope_F = fit_slope(lh, lf);
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    study.slope_E2 = study.slope_Einf = study.slope_F = nan;
  }
  return study;
}

}  // namespace wl1
