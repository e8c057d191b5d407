#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wl1/basis.hpp"
#include "wl1/grid.hpp"
#include "wl1/sampling.hpp"

namespace wl1 {

/// Data y_n = sqrt(tau_n) (f(t_n) + e_n) for the assembled matrix A = U P_K.
struct SamplingProblem {
  Eigen::MatrixXcd A;
  Eigen::VectorXcd y;
  Eigen::VectorXd w;
  double eta = 0.0;
};

Eigen::VectorXcd data_vector(const PointSet& ps, std::span<const Complex> values);
Eigen::VectorXcd data_vector(const PointSet& ps, const RealFunction& f);

SamplingProblem make_problem(const SamplingMatrix& a, const WeightVector& w,
                             Eigen::VectorXcd y, double eta);

enum class ConstraintMode { Equality, Inequality };
enum class SolveStatus { Converged, MaxIter, InfeasibleDetected };

std::string to_string(SolveStatus status);

struct SolverOptions {
  /// Feasibility tolerance relative to ||y||.
  double tol_feas = 1e-9;
  /// Gap tolerance relative to max(1, objective).
  double tol_gap = 1e-8;
  long max_iter = 200000;
  /// Initial penalty; 0 selects it from the data.
  double rho = 0.0;
  /// Residual balancing runs for this many iterations, then rho is frozen.
  long adapt_iters = 5000;
  long check_every = 10;
  long polish_every = 50;
  bool record_trace = false;
};

struct BoundSample {
  long iteration;
  double upper;
  double lower;
};

struct SolveResult {
  Eigen::VectorXcd z;
  /// ||z||_{1,w}.
  double objective = 0.0;
  /// max(||Az - y|| - eta, 0).
  double feasibility_residual = 0.0;
  /// Best primal objective minus best certified dual bound.
  double duality_gap = 0.0;
  double lower_bound = 0.0;
  long iterations = 0;
  SolveStatus status = SolveStatus::MaxIter;
  /// Best upper and lower bounds seen so far, at every check.
  std::vector<BoundSample> trace;
};

/// min sum_i w_i |z_i| subject to Az = y (Equality) or ||Az - y|| <= eta
/// (Inequality). Real arithmetic is used whenever A and y are real.
SolveResult solve_weighted_l1(const SamplingProblem& problem, ConstraintMode mode,
                              const SolverOptions& options = {});
SolveResult solve_weighted_l1(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
                              const Eigen::VectorXd& w, double eta, ConstraintMode mode,
                              const SolverOptions& options = {});

/// Minimum-norm least-squares solution of min ||A_M z - y|| with A_M the
/// first M columns.
Eigen::VectorXcd solve_least_squares(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
                                     Index m);

struct OracleFit {
  Index M = 0;
  Eigen::VectorXcd coefficients;
  double error = 0.0;
  /// Sup error for M = 1..N (entry M-1).
  std::vector<double> errors;
};

/// Least squares for every M = 1..min(N, K), keeping the M with the
/// smallest sup error against f on the evaluation grid.
OracleFit oracle_least_squares(const SamplingMatrix& a, const Eigen::VectorXcd& y,
                               const RealFunction& f, std::span<const double> eval_grid);

/// Chebyshev-distributed evaluation grid -cos(pi k / (n - 1)).
std::vector<double> chebyshev_grid(Index resolution);

Complex synthesize(const Eigen::VectorXcd& z, const Basis& basis, double t);
Eigen::VectorXcd synthesize(const Eigen::VectorXcd& z, const Basis& basis,
                            std::span<const double> t);

double sup_error(const RealFunction& f, const Eigen::VectorXcd& z, const Basis& basis,
                 Index resolution = 10000);
double sup_error(const RealFunction& f, const Eigen::VectorXcd& z, const Basis& basis,
                 std::span<const double> grid);

/// Plain-text record: key/value lines followed by one coefficient per line.
void write_result(std::ostream& out, const SolveResult& result);
SolveResult read_result(std::istream& in);

}  // namespace wl1
