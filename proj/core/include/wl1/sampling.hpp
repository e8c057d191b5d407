#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wl1/basis.hpp"
#include "wl1/grid.hpp"

namespace wl1 {

/// The truncated sampling operator U P_K: entry (n, k) = sqrt(tau_n) phi_k(t_n).
class SamplingMatrix {
 public:
  static SamplingMatrix build(const Basis& basis, const PointSet& ps, Index columns);

  Index rows() const noexcept { return entries_.rows(); }
  Index cols() const noexcept { return entries_.cols(); }
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  /// Real part as a dense matrix; valid for Jacobi bases.
  Eigen::MatrixXd real_entries() const;
  const Basis& basis() const noexcept { return basis_; }
  const PointSet& pointset() const noexcept { return pointset_; }

  /// U P_M for M <= cols().
  SamplingMatrix leading(Index columns) const;

 private:
  SamplingMatrix(Basis basis, PointSet ps, Eigen::MatrixXcd entries)
      : basis_(std::move(basis)), pointset_(std::move(ps)), entries_(std::move(entries)) {}

  Basis basis_;
  PointSet pointset_;
  Eigen::MatrixXcd entries_;
};

/// Writes "N K" (real) or "N K complex" followed by one row per line.
/// Complex rows hold interleaved real and imaginary parts.
void write_matrix(std::ostream& out, const Eigen::MatrixXcd& m, bool real);
Eigen::MatrixXcd read_matrix(std::istream& in);

enum class WeightScheme {
  PolyGamma,     // w_i = i^gamma ||phi_i||_inf
  FourierGamma,  // w_j = 1 + |j|^gamma
  Unit,          // w_i = ||phi_i||_inf
  Power,         // w_i = i^gamma (may violate w_i >= ||phi_i||_inf)
  Custom,
};

std::string to_string(WeightScheme scheme);
WeightScheme parse_weight_scheme(const std::string& text);

struct WeightVector {
  Eigen::VectorXd w;
  WeightScheme scheme = WeightScheme::Unit;
  double gamma = 0.0;
  /// Storage indices k with w_k < ||phi_k||_inf.
  std::vector<Index> violations;

  Index size() const noexcept { return w.size(); }
  bool admissible() const noexcept { return violations.empty(); }
};

/// Throws on gamma < 0 or on any nonpositive weight. Violations of
/// w_i >= ||phi_i||_inf are recorded, not rejected.
WeightVector make_weights(const Basis& basis, Index count, WeightScheme scheme,
                          double gamma);
WeightVector make_custom_weights(const Basis& basis, Eigen::VectorXd w);

/// Singular values in descending order.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a);

/// Smallest singular value of A as a map on C^K: 0 whenever K exceeds the
/// number of rows.
double min_singular_value(const Eigen::MatrixXcd& a);

struct RankInfo {
  Index rank = 0;
  /// Smallest singular value among the first `rank`.
  double sigma = 0.0;
  double sigma_max = 0.0;
};

/// Rank uses a relative threshold on sigma / sigma_max.
RankInfo smallest_nonzero_singular_value(const Eigen::MatrixXcd& a,
                                         double rel_threshold = 1e-10);

enum class KPolicy { SigmaSearch, TheoremFormula };

struct KChoice {
  Index K = 0;
  double sigma = 0.0;
  Index rank = 0;
  /// Calibrated constant for the theorem formula (0 for the search).
  double constant = 0.0;
};

struct KOptions {
  KPolicy policy = KPolicy::SigmaSearch;
  int r = 1;
  Index cap = Index{1} << 16;
};

/// SigmaSearch doubles K from N until rank(U P_K) == rank(U P_2K) and the
/// smallest nonzero singular value of U P_K exceeds 1 - epsilon.
/// TheoremFormula returns ceil(C h^{1/(2r)} xi^{-1-1/r}) with C calibrated
/// on the midpoint-equispaced grid of 20 nodes by the search.
KChoice choose_K(const Basis& basis, const PointSet& ps, double epsilon,
                 const KOptions& options = {});

/// Calibrated C for the theorem formula at the given epsilon.
double calibrate_theorem_constant(const Basis& basis, double epsilon);

}  // namespace wl1
