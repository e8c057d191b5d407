#include "wl1/sampling.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <Eigen/SVD>

#include "wl1/error.hpp"

namespace wl1 {

SamplingMatrix SamplingMatrix::build(const Basis& basis, const PointSet& ps,
                                     Index columns) {
  if (columns < 1) throw Error(ErrorKind::Dimension, "K must be at least 1");
  Eigen::MatrixXcd entries = basis_matrix(basis, ps.points(), columns);
  for (Index n = 0; n < entries.rows(); ++n) {
    entries.row(n) *= std::sqrt(ps.tau()[static_cast<std::size_t>(n)]);
  }
  return SamplingMatrix(basis, ps, std::move(entries));
}

Eigen::MatrixXd SamplingMatrix::real_entries() const {
  if (!basis_.is_real()) {
    throw Error(ErrorKind::Unsupported, "real view of a complex sampling matrix");
  }
  return entries_.real();
}

SamplingMatrix SamplingMatrix::leading(Index columns) const {
  if (columns < 1 || columns > cols()) {
    throw Error(ErrorKind::Dimension, "leading block larger than the matrix");
  }
  return SamplingMatrix(basis_, pointset_, entries_.leftCols(columns));
}

void write_matrix(std::ostream& out, const Eigen::MatrixXcd& m, bool real) {
  const auto old = out.precision(17);
  out << m.rows() << ' ' << m.cols() << (real ? "" : " complex") << '\n';
  for (Index n = 0; n < m.rows(); ++n) {
    for (Index k = 0; k < m.cols(); ++k) {
      if (k > 0) out << ' ';
      out << m(n, k).real();
      if (!real) out << ' ' << m(n, k).imag();
    }
    out << '\n';
  }
  out.precision(old);
}

Eigen::MatrixXcd read_matrix(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::Data, "missing matrix header");
  std::istringstream fields(header);
  Index rows = 0, cols = 0;
  std::string flag;
  if (!(fields >> rows >> cols) || rows < 0 || cols < 0) {
    throw Error(ErrorKind::Data, "malformed matrix header");
  }
  fields >> flag;
  const bool complex = flag == "complex";
  Eigen::MatrixXcd m(rows, cols);
  for (Index n = 0; n < rows; ++n) {
    for (Index k = 0; k < cols; ++k) {
      double re = 0.0, im = 0.0;
      if (!(in >> re)) throw Error(ErrorKind::Data, "truncated matrix data");
      if (complex && !(in >> im)) throw Error(ErrorKind::Data, "truncated matrix data");
      m(n, k) = {re, im};
    }
  }
  return m;
}

std::string to_string(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::PolyGamma: return "poly_gamma";
    case WeightScheme::FourierGamma: return "fourier_gamma";
    case WeightScheme::Unit: return "unit";
    case WeightScheme::Power: return "power";
    case WeightScheme::Custom: return "custom";
  }
  return "unknown";
}

WeightScheme parse_weight_scheme(const std::string& text) {
  if (text == "poly_gamma") return WeightScheme::PolyGamma;
  if (text == "fourier_gamma") return WeightScheme::FourierGamma;
  if (text == "unit") return WeightScheme::Unit;
  if (text == "power") return WeightScheme::Power;
  if (text == "custom") return WeightScheme::Custom;
  throw Error(ErrorKind::Domain, "unknown weight scheme '" + text + "'");
}

namespace {

void record_violations(const Basis& basis, WeightVector& weights) {
  weights.violations.clear();
  for (Index k = 0; k < weights.w.size(); ++k) {
    if (!(weights.w(k) > 0.0) || !std::isfinite(weights.w(k))) {
      throw Error(ErrorKind::Domain, "weights must be positive and finite");
    }
    // Relative slack absorbs rounding in the uniform-norm evaluation.
    if (weights.w(k) < basis.linf_norm(k) * (1.0 - 1e-12)) {
      weights.violations.push_back(k);
    }
  }
}

}  // namespace

WeightVector make_weights(const Basis& basis, Index count, WeightScheme scheme,
                          double gamma) {
  if (count < 1) throw Error(ErrorKind::Dimension, "weight vector needs K >= 1");
  if (!(gamma >= 0.0)) throw Error(ErrorKind::Domain, "gamma must be nonnegative");
  WeightVector weights;
  weights.scheme = scheme;
  weights.gamma = gamma;
  weights.w.resize(count);
  for (Index k = 0; k < count; ++k) {
    const double i = static_cast<double>(k + 1);
    switch (scheme) {
      case WeightScheme::PolyGamma:
        weights.w(k) = std::pow(i, gamma) * basis.linf_norm(k);
        break;
      case WeightScheme::FourierGamma: {
        const double j = std::abs(static_cast<double>(basis.frequency(k)));
        weights.w(k) = 1.0 + (j == 0.0 ? 0.0 : std::pow(j, gamma));
        break;
      }
      case WeightScheme::Unit:
        weights.w(k) = basis.linf_norm(k);
        break;
      case WeightScheme::Power:
        weights.w(k) = std::pow(i, gamma);
        break;
      case WeightScheme::Custom:
        throw Error(ErrorKind::Domain, "custom weights need explicit values");
    }
  }
  record_violations(basis, weights);
  return weights;
}

WeightVector make_custom_weights(const Basis& basis, Eigen::VectorXd w) {
  WeightVector weights;
  weights.scheme = WeightScheme::Custom;
  weights.w = std::move(w);
  if (weights.w.size() < 1) throw Error(ErrorKind::Dimension, "empty weight vector");
  record_violations(basis, weights);
  return weights;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) throw Error(ErrorKind::Dimension, "empty matrix");
  if (!a.allFinite()) throw Error(ErrorKind::Data, "non-finite matrix entries");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorKind::Numerical, "SVD did not converge (" + std::to_string(a.rows()) +
                                          "x" + std::to_string(a.cols()) + ")");
  }
  return svd.singularValues();
}

double min_singular_value(const Eigen::MatrixXcd& a) {
  const Eigen::VectorXd s = singular_values(a);
  if (a.cols() > a.rows()) return 0.0;
  return s(s.size() - 1);
}

RankInfo smallest_nonzero_singular_value(const Eigen::MatrixXcd& a, double rel_threshold) {
  const Eigen::VectorXd s = singular_values(a);
  RankInfo info;
  info.sigma_max = s(0);
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_threshold * info.sigma_max) {
      info.rank = i + 1;
      info.sigma = s(i);
    }
  }
  return info;
}

namespace {

KChoice sigma_search(const Basis& basis, const PointSet& ps, double epsilon, Index cap) {
  // One matrix at the largest size reached; leading blocks give the rest.
  Index k = ps.size();
  Eigen::MatrixXcd full = SamplingMatrix::build(basis, ps, 2 * k).entries();
  RankInfo current = smallest_nonzero_singular_value(full.leftCols(k));
  while (true) {
    if (k > cap) {
      throw Error(ErrorKind::Numerical,
                  "sigma search exceeded the K cap of " + std::to_string(cap));
    }
    if (full.cols() < 2 * k) full = SamplingMatrix::build(basis, ps, 2 * k).entries();
    const RankInfo doubled = smallest_nonzero_singular_value(full.leftCols(2 * k));
    if (current.rank == doubled.rank && current.sigma > 1.0 - epsilon) {
      return KChoice{k, current.sigma, current.rank, 0.0};
    }
    k *= 2;
    current = doubled;
  }
}

}  // namespace

double calibrate_theorem_constant(const Basis& basis, double epsilon) {
  constexpr int kNodes = 20;
  std::vector<double> t(kNodes);
  for (int n = 0; n < kNodes; ++n) t[n] = -1.0 + (2.0 * n + 1.0) / kNodes;
  const PointSet ps = PointSet::build(t, basis);
  const KChoice search = sigma_search(basis, ps, epsilon, Index{1} << 16);
  return static_cast<double>(search.K) / (std::sqrt(ps.h()) * std::pow(ps.xi(), -2.0));
}

KChoice choose_K(const Basis& basis, const PointSet& ps, double epsilon,
                 const KOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorKind::Domain, "epsilon must lie in (0, 1)");
  }
  if (options.policy == KPolicy::SigmaSearch) {
    return sigma_search(basis, ps, epsilon, options.cap);
  }
  if (options.r < 1) throw Error(ErrorKind::Domain, "theorem formula needs r >= 1");
  if (ps.degenerate()) {
    throw Error(ErrorKind::DegenerateGrid, "theorem formula needs xi > 0");
  }
  const double c = calibrate_theorem_constant(basis, epsilon);
  const double r = static_cast<double>(options.r);
  const double k_real =
      std::ceil(c * std::pow(ps.h(), 1.0 / (2.0 * r)) * std::pow(ps.xi(), -1.0 - 1.0 / r));
  if (!(k_real <= static_cast<double>(options.cap))) {
    throw Error(ErrorKind::Numerical, "theorem formula K exceeds the cap");
  }
  KChoice choice;
  choice.K = std::max<Index>(1, static_cast<Index>(k_real));
  choice.constant = c;
  const RankInfo info =
      smallest_nonzero_singular_value(SamplingMatrix::build(basis, ps, choice.K).entries());
  choice.sigma = info.sigma;
  choice.rank = info.rank;
  return choice;
}

}  // namespace wl1
