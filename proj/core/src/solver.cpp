#include "wl1/solver.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "wl1/error.hpp"

namespace wl1 {

Eigen::VectorXcd data_vector(const PointSet& ps, std::span<const Complex> values) {
  if (static_cast<Index>(values.size()) != ps.size()) {
    throw Error(ErrorKind::Dimension, "one data value per point required");
  }
  Eigen::VectorXcd y(ps.size());
  for (Index n = 0; n < ps.size(); ++n) {
    y(n) = std::sqrt(ps.tau()[static_cast<std::size_t>(n)]) * values[static_cast<std::size_t>(n)];
  }
  return y;
}

Eigen::VectorXcd data_vector(const PointSet& ps, const RealFunction& f) {
  std::vector<Complex> values;
  values.reserve(ps.points().size());
  for (double t : ps.points()) values.emplace_back(f(t), 0.0);
  return data_vector(ps, values);
}

SamplingProblem make_problem(const SamplingMatrix& a, const WeightVector& w,
                             Eigen::VectorXcd y, double eta) {
  if (w.size() != a.cols()) throw Error(ErrorKind::Dimension, "weights must have K entries");
  if (y.size() != a.rows()) throw Error(ErrorKind::Dimension, "data must have N entries");
  return SamplingProblem{a.entries(), std::move(y), w.w, eta};
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::InfeasibleDetected: return "infeasible_detected";
  }
  return "unknown";
}

namespace {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
S phase(S x) {
  const double a = std::abs(x);
  return a == 0.0 ? S(0) : x / a;
}

template <class S>
double real_dot(const Vec<S>& a, const Vec<S>& b) {
  return std::real(a.dot(b));
}

double l1(const Eigen::VectorXd& v) { return v.cwiseAbs().sum(); }
double l1(const Eigen::VectorXcd& v) { return v.cwiseAbs().sum(); }

// ADMM on the weighted variable v = W z: min ||v||_1 + indicator of
// {v : ||B v - y|| <= eta}, B = A W^{-1}, with ||y|| scaled to one. The
// constraint projection uses the thin SVD of B.
template <class S>
class WeightedL1 {
 public:
  WeightedL1(const Mat<S>& a, const Vec<S>& y, const Eigen::VectorXd& w, double eta,
             bool equality, const SolverOptions& opts)
      : a_(a), y_(y), w_(w), eta_(equality ? 0.0 : eta), equality_(equality), opts_(opts) {}

  SolveResult run();

 private:
  struct Candidate {
    Vec<S> v;
    double objective = std::numeric_limits<double>::infinity();
  };

  double residual(const Vec<S>& v) const { return (b_ * v - yb_).norm(); }
  Vec<S> project(const Vec<S>& v) const;
  Vec<S> min_norm_correction(const Vec<S>& v) const;
  void offer_primal(const Vec<S>& v);
  void offer_dual(const Vec<S>& q);
  void offer_segment(const Vec<S>& from, const Vec<S>& to);
  void polish(const Vec<S>& z, const Vec<S>* admm_dual);

  const Mat<S>& a_;
  const Vec<S>& y_;
  const Eigen::VectorXd& w_;
  double eta_;
  bool equality_;
  SolverOptions opts_;

  Mat<S> b_;
  Vec<S> yb_;
  double eb_ = 0.0;
  double eta_eff_ = 0.0;
  double tol_ = 0.0;
  Mat<S> ur_, vr_;
  Eigen::VectorXd s_;
  Vec<S> yt_;
  Candidate best_;
  double lower_ = 0.0;
};

template <class S>
Vec<S> WeightedL1<S>::project(const Vec<S>& v) const {
  const Vec<S> b = vr_.adjoint() * v;
  Vec<S> bp(b.size());
  if (eta_eff_ == 0.0) {
    bp = yt_.cwiseQuotient(s_.template cast<S>());
  } else {
    const Vec<S> c = s_.template cast<S>().cwiseProduct(b) - yt_;
    const double cn = c.norm();
    if (cn <= eta_eff_) return v;
    // ||c / (1 + mu s^2)|| = eta_eff, solved by Newton on 1 / ||.|| with a
    // bisection safeguard.
    const Eigen::ArrayXd s2 = s_.array().square();
    const Eigen::ArrayXd c2 = c.cwiseAbs2().array();
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    double mu = 0.0;
    for (int it = 0; it < 200; ++it) {
      const Eigen::ArrayXd d = 1.0 + mu * s2;
      const double n2 = (c2 / d.square()).sum();
      const double n = std::sqrt(n2);
      if (n > eta_eff_) lo = mu; else hi = mu;
      if (std::abs(n - eta_eff_) <= 1e-15 * eta_eff_) break;
      const double slope = (s2 * c2 / d.cube()).sum() / (n2 * n);
      double next = mu + (1.0 / n - 1.0 / eta_eff_) / slope;
      if (!(next > lo && next < hi)) {
        next = std::isfinite(hi) ? 0.5 * (lo + hi) : std::max(2.0 * lo, 1.0);
      }
      if (next == mu) break;
      mu = next;
    }
    for (Index k = 0; k < b.size(); ++k) {
      bp(k) = (b(k) + mu * s_(k) * yt_(k)) / (1.0 + mu * s_(k) * s_(k));
    }
  }
  return v + vr_ * (bp - b);
}

template <class S>
Vec<S> WeightedL1<S>::min_norm_correction(const Vec<S>& v) const {
  const Vec<S> r = yb_ - b_ * v;
  return v + vr_ * (ur_.adjoint() * r).cwiseQuotient(s_.template cast<S>());
}

template <class S>
void WeightedL1<S>::offer_primal(const Vec<S>& v) {
  if (!v.allFinite()) return;
  if (residual(v) - eb_ > tol_) return;
  const double obj = l1(v);
  if (obj < best_.objective) {
    best_.v = v;
    best_.objective = obj;
  }
}

// Weak duality: for |B* q|_i <= 1, ||v||_1 >= Re<q, y> - eta ||q||.
template <class S>
void WeightedL1<S>::offer_dual(const Vec<S>& q) {
  if (!q.allFinite()) return;
  const double m = (b_.adjoint() * q).cwiseAbs().maxCoeff();
  if (!(m > 0.0)) return;
  const double value = (std::abs(real_dot<S>(q, yb_)) - eb_ * q.norm()) / m;
  lower_ = std::max(lower_, value);
}

// Feasible point on the segment from `from` toward `to` (which must be
// feasible) closest to `from`.
template <class S>
void WeightedL1<S>::offer_segment(const Vec<S>& from, const Vec<S>& to) {
  const Vec<S> r0 = yb_ - b_ * from;
  const double n0 = r0.norm();
  if (n0 <= eb_) {
    offer_primal(from);
    return;
  }
  const Vec<S> d = b_ * (to - from);
  const double dd = d.squaredNorm();
  if (dd == 0.0) return;
  const double rd = real_dot<S>(r0, d);
  const double disc = rd * rd - dd * (n0 * n0 - eb_ * eb_);
  if (disc < 0.0) return;
  const double t = std::clamp((rd - std::sqrt(disc)) / dd, 0.0, 1.0);
  offer_primal(from + t * (to - from));
}

template <class S>
void WeightedL1<S>::polish(const Vec<S>& z, const Vec<S>* admm_dual) {
  std::vector<Index> support;
  for (Index i = 0; i < z.size(); ++i) {
    if (z(i) != S(0)) support.push_back(i);
  }
  if (support.empty()) return;
  const Index ns = static_cast<Index>(support.size());
  Mat<S> bs(b_.rows(), ns);
  Vec<S> zs(ns);
  for (Index j = 0; j < ns; ++j) {
    bs.col(j) = b_.col(support[j]);
    zs(j) = z(support[j]);
  }
  auto scatter = [&](const Vec<S>& part) {
    Vec<S> v = Vec<S>::Zero(z.size());
    for (Index j = 0; j < ns; ++j) v(support[j]) = part(j);
    return v;
  };

  Eigen::CompleteOrthogonalDecomposition<Mat<S>> cod(bs);
  const Vec<S> ls = scatter(cod.solve(yb_));
  Vec<S> target = ls;
  if (residual(target) > eta_eff_ + tol_) target = min_norm_correction(target);

  if (equality_) {
    offer_primal(target);
    if (residual(target) > tol_) offer_primal(min_norm_correction(target));
    // Dual on the support: B_S* q = sgn(v_S).
    Vec<S> sgn(ns);
    for (Index j = 0; j < ns; ++j) sgn(j) = phase(ls(support[j]));
    Eigen::CompleteOrthogonalDecomposition<Mat<S>> cod_t(bs.adjoint());
    offer_dual(cod_t.solve(sgn));
    if (admm_dual != nullptr) {
      offer_dual(*admm_dual + cod_t.solve(sgn - bs.adjoint() * *admm_dual));
    }
    return;
  }

  offer_segment(z, target);
  // Minimize the linear functional sgn(z_S) . v_S over the data ellipsoid
  // restricted to the support.
  Eigen::ColPivHouseholderQR<Mat<S>> qr(bs);
  if (qr.rank() == ns && ns <= bs.rows()) {
    const Vec<S> vls = qr.solve(yb_);
    const double rls = (bs * vls - yb_).norm();
    const double slack2 = eb_ * eb_ - rls * rls;
    if (slack2 > 0.0) {
      Vec<S> c(ns);
      for (Index j = 0; j < ns; ++j) c(j) = phase(zs(j));
      const auto r = qr.matrixR().topLeftCorner(ns, ns).template triangularView<Eigen::Upper>();
      const Vec<S> pc = qr.colsPermutation().transpose() * c;
      const Vec<S> t = r.adjoint().solve(pc);
      const double nt = t.norm();
      if (nt > 0.0) {
        const Vec<S> d = qr.colsPermutation() * Vec<S>(r.solve(t));
        const Vec<S> v = scatter(vls - (std::sqrt(slack2) / nt) * d);
        offer_primal(v);
        offer_dual(Vec<S>(yb_ - b_ * v));
      }
    }
  }
  offer_dual(Vec<S>(yb_ - b_ * best_.v));
  if (admm_dual != nullptr) offer_dual(*admm_dual);
}

template <class S>
SolveResult WeightedL1<S>::run() {
  const Index n = a_.rows(), k = a_.cols();
  if (w_.size() != k) throw Error(ErrorKind::Dimension, "weights must have K entries");
  if (y_.size() != n) throw Error(ErrorKind::Dimension, "data must have N entries");
  if (!a_.allFinite() || !y_.allFinite() || !w_.allFinite() || !std::isfinite(eta_)) {
    throw Error(ErrorKind::Data, "non-finite entries in the problem");
  }
  if ((w_.array() <= 0.0).any()) throw Error(ErrorKind::Domain, "weights must be positive");
  if (eta_ < 0.0) throw Error(ErrorKind::Domain, "eta must be nonnegative");

  SolveResult result;
  const double ynorm = y_.norm();
  auto finish = [&](const Vec<S>& v_scaled, double scale) {
    const Vec<S> z = w_.cwiseInverse().template cast<S>().cwiseProduct(v_scaled) * scale;
    result.z = z.template cast<Complex>();
    result.objective = w_.cwiseProduct(z.cwiseAbs()).sum();
    result.feasibility_residual = std::max(0.0, (a_ * z - y_).norm() - eta_);
  };
  if (ynorm <= eta_ || ynorm == 0.0) {
    finish(Vec<S>::Zero(k), 1.0);
    result.status = SolveStatus::Converged;
    return result;
  }

  yb_ = y_ / ynorm;
  eb_ = eta_ / ynorm;
  tol_ = opts_.tol_feas;
  b_ = a_ * w_.cwiseInverse().template cast<S>().asDiagonal();

  Eigen::BDCSVD<Mat<S>> svd(b_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sig = svd.singularValues();
  const double thresh =
      static_cast<double>(std::max(n, k)) * std::numeric_limits<double>::epsilon() * sig(0);
  Index rank = 0;
  while (rank < sig.size() && sig(rank) > thresh) ++rank;
  ur_ = svd.matrixU().leftCols(rank);
  vr_ = svd.matrixV().leftCols(rank);
  s_ = sig.head(rank);
  yt_ = ur_.adjoint() * yb_;
  const double yperp = (yb_ - ur_ * yt_).norm();

  const Vec<S> v0 = vr_ * yt_.cwiseQuotient(s_.template cast<S>());
  if (yperp > eb_ + tol_) {
    finish(v0, ynorm);
    result.status = SolveStatus::InfeasibleDetected;
    result.duality_gap = std::numeric_limits<double>::infinity();
    return result;
  }
  eta_eff_ = std::sqrt(std::max(0.0, eb_ * eb_ - yperp * yperp));

  best_ = Candidate{};
  lower_ = 0.0;
  offer_primal(project(v0));
  if (best_.v.size() != k) {
    // Keep a candidate even if rounding pushes the projection past the tolerance.
    best_.v = project(v0);
    best_.objective = l1(best_.v);
  }

  double rho = opts_.rho > 0.0 ? opts_.rho
                               : std::sqrt(static_cast<double>(k)) / std::max(v0.norm(), 1e-300);
  Vec<S> z = v0, u = Vec<S>::Zero(k), x(k), z_prev(k);
  const double scale_floor = 1.0 / ynorm;
  long it = 0;
  bool converged = false;
  auto check = [&](long iteration) {
    if (opts_.record_trace) {
      result.trace.push_back({iteration, best_.objective * ynorm, lower_ * ynorm});
    }
    return best_.objective - lower_ <=
           opts_.tol_gap * std::max(scale_floor, best_.objective);
  };

  while (it < opts_.max_iter) {
    ++it;
    x = project(z - u);
    z_prev = z;
    const double thr = 1.0 / rho;
    const Vec<S> shifted = x + u;
    for (Index i = 0; i < k; ++i) {
      const double m = std::abs(shifted(i));
      z(i) = m <= thr ? S(0) : shifted(i) * (1.0 - thr / m);
    }
    u += x - z;

    if (it < opts_.adapt_iters && it % 10 == 0) {
      const double rp = (x - z).norm();
      const double rd = rho * (z - z_prev).norm();
      if (rp > 10.0 * rd) {
        rho *= 2.0;
        u /= 2.0;
      } else if (rd > 10.0 * rp) {
        rho /= 2.0;
        u *= 2.0;
      }
    }

    const bool do_polish = opts_.polish_every > 0 && it % opts_.polish_every == 0;
    const bool do_check = do_polish || (opts_.check_every > 0 && it % opts_.check_every == 0);
    if (!do_check) continue;
    offer_primal(x);
    const Vec<S> lam = rho * u;
    const Vec<S> q = ur_ * (vr_.adjoint() * lam).cwiseQuotient(s_.template cast<S>());
    offer_dual(q);
    if (do_polish) polish(z, &q);
    if (check(it)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    polish(z, nullptr);
    converged = check(it);
  }

  finish(best_.v, ynorm);
  result.iterations = it;
  result.lower_bound = lower_ * ynorm;
  result.duality_gap = std::max(0.0, result.objective - result.lower_bound);
  result.status = converged && result.feasibility_residual <= opts_.tol_feas * ynorm
                      ? SolveStatus::Converged
                      : SolveStatus::MaxIter;
  return result;
}

bool is_real(const Eigen::MatrixXcd& a) { return a.imag().isZero(0.0); }
bool is_real(const Eigen::VectorXcd& v) { return v.imag().isZero(0.0); }

}  // namespace

SolveResult solve_weighted_l1(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
                              const Eigen::VectorXd& w, double eta, ConstraintMode mode,
                              const SolverOptions& options) {
  if (a.size() == 0) throw Error(ErrorKind::Dimension, "empty sampling matrix");
  const bool equality = mode == ConstraintMode::Equality;
  if (is_real(a) && is_real(y)) {
    const Eigen::MatrixXd ar = a.real();
    const Eigen::VectorXd yr = y.real();
    return WeightedL1<double>(ar, yr, w, eta, equality, options).run();
  }
  return WeightedL1<Complex>(a, y, w, eta, equality, options).run();
}

SolveResult solve_weighted_l1(const SamplingProblem& problem, ConstraintMode mode,
                              const SolverOptions& options) {
  return solve_weighted_l1(problem.A, problem.y, problem.w, problem.eta, mode, options);
}

Eigen::VectorXcd solve_least_squares(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
                                     Index m) {
  if (m < 1 || m > a.cols()) throw Error(ErrorKind::Dimension, "M must lie in 1..K");
  if (y.size() != a.rows()) throw Error(ErrorKind::Dimension, "data must have N entries");
  if (is_real(a) && is_real(y)) {
    const Eigen::MatrixXd am = a.leftCols(m).real();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(am);
    return Eigen::VectorXd(cod.solve(y.real())).cast<Complex>();
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a.leftCols(m));
  return cod.solve(y);
}

std::vector<double> chebyshev_grid(Index resolution) {
  if (resolution < 2) throw Error(ErrorKind::Domain, "evaluation grid needs two points");
  std::vector<double> t(static_cast<std::size_t>(resolution));
  for (Index k = 0; k < resolution; ++k) {
    t[static_cast<std::size_t>(k)] =
        -std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(resolution - 1));
  }
  t.front() = -1.0;
  t.back() = 1.0;
  return t;
}

Complex synthesize(const Eigen::VectorXcd& z, const Basis& basis, double t) {
  std::vector<Complex> values(static_cast<std::size_t>(z.size()));
  basis.eval_all(t, values);
  Complex sum = 0.0;
  for (Index k = 0; k < z.size(); ++k) sum += z(k) * values[static_cast<std::size_t>(k)];
  return sum;
}

Eigen::VectorXcd synthesize(const Eigen::VectorXcd& z, const Basis& basis,
                            std::span<const double> t) {
  Eigen::VectorXcd out(static_cast<Index>(t.size()));
  std::vector<Complex> values(static_cast<std::size_t>(z.size()));
  for (std::size_t n = 0; n < t.size(); ++n) {
    basis.eval_all(t[n], values);
    Complex sum = 0.0;
    for (Index k = 0; k < z.size(); ++k) sum += z(k) * values[static_cast<std::size_t>(k)];
    out(static_cast<Index>(n)) = sum;
  }
  return out;
}

double sup_error(const RealFunction& f, const Eigen::VectorXcd& z, const Basis& basis,
                 std::span<const double> grid) {
  const Eigen::VectorXcd approx = synthesize(z, basis, grid);
  double err = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    err = std::max(err, std::abs(f(grid[n]) - approx(static_cast<Index>(n))));
  }
  return err;
}

double sup_error(const RealFunction& f, const Eigen::VectorXcd& z, const Basis& basis,
                 Index resolution) {
  const std::vector<double> grid = chebyshev_grid(resolution);
  return sup_error(f, z, basis, grid);
}

OracleFit oracle_least_squares(const SamplingMatrix& a, const Eigen::VectorXcd& y,
                               const RealFunction& f, std::span<const double> eval_grid) {
  const Index m_max = std::min(a.rows(), a.cols());
  const Eigen::MatrixXcd e = basis_matrix(a.basis(), eval_grid, m_max);
  Eigen::VectorXd fv(static_cast<Index>(eval_grid.size()));
  for (std::size_t n = 0; n < eval_grid.size(); ++n) fv(static_cast<Index>(n)) = f(eval_grid[n]);

  OracleFit fit;
  fit.error = std::numeric_limits<double>::infinity();
  for (Index m = 1; m <= m_max; ++m) {
    Eigen::VectorXcd c = solve_least_squares(a.entries(), y, m);
    const double err = (fv.cast<Complex>() - e.leftCols(m) * c).cwiseAbs().maxCoeff();
    fit.errors.push_back(err);
    if (err < fit.error) {
      fit.error = err;
      fit.M = m;
      fit.coefficients = std::move(c);
    }
  }
  return fit;
}

void write_result(std::ostream& out, const SolveResult& result) {
  const auto old = out.precision(17);
  out << "status " << to_string(result.status) << '\n'
      << "iterations " << result.iterations << '\n'
      << "objective " << result.objective << '\n'
      << "feasibility_residual " << result.feasibility_residual << '\n'
      << "duality_gap " << result.duality_gap << '\n'
      << "lower_bound " << result.lower_bound << '\n'
      << "coefficients " << result.z.size() << '\n';
  for (Index k = 0; k < result.z.size(); ++k) {
    out << result.z(k).real() << ' ' << result.z(k).imag() << '\n';
  }
  out.precision(old);
}

SolveResult read_result(std::istream& in) {
  SolveResult result;
  std::string key;
  auto expect = [&](const char* name) {
    if (!(in >> key) || key != name) {
      throw Error(ErrorKind::Data, std::string("expected '") + name + "' in result record");
    }
  };
  std::string status;
  expect("status");
  in >> status;
  if (status == "converged") result.status = SolveStatus::Converged;
  else if (status == "max_iter") result.status = SolveStatus::MaxIter;
  else if (status == "infeasible_detected") result.status = SolveStatus::InfeasibleDetected;
  else throw Error(ErrorKind::Data, "unknown status '" + status + "'");
  expect("iterations");
  in >> result.iterations;
  expect("objective");
  in >> result.objective;
  expect("feasibility_residual");
  in >> result.feasibility_residual;
  expect("duality_gap");
  in >> result.duality_gap;
  expect("lower_bound");
  in >> result.lower_bound;
  expect("coefficients");
  Index count = 0;
  if (!(in >> count) || count < 0) throw Error(ErrorKind::Data, "bad coefficient count");
  result.z.resize(count);
  for (Index k = 0; k < count; ++k) {
    double re = 0.0, im = 0.0;
    if (!(in >> re >> im)) throw Error(ErrorKind::Data, "truncated coefficient list");
    result.z(k) = {re, im};
  }
  return result;
}

}  // namespace wl1
