#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wl1/basis.hpp"
#include "wl1/grid.hpp"
#include "wl1/sampling.hpp"
#include "wl1/solver.hpp"
#include "wl1/table.hpp"

namespace wl1 {

enum class ExperimentKind { Aliasing, WeightSweep, CompareLegendre, CompareFourier, Diagnostics };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& text);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Aliasing;
  /// Empty selects the experiment's own basis.
  std::string basis;
  /// "equispaced", "jittered", "uniform", "chebyshev" or a point file; empty
  /// selects the experiment's own grid.
  std::string points;
  double jitter_amplitude = 1.0;
  std::vector<Index> N_list;
  std::vector<double> gamma_list;
  /// K = k_factor * N unless K is set.
  double k_factor = 4.0;
  Index K = 0;
  double eta = 0.0;
  /// Uniform noise in [-noise, noise] added to each sample; negative selects
  /// the experiment default.
  double noise = -1.0;
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  Index eval_resolution = 10000;
  bool relax_weights = false;
  /// Test-function ids; empty selects the experiment's family.
  std::vector<std::string> functions;
  /// Diagnostics: grid of M values and the epsilon for choose_K.
  std::vector<Index> M_list;
  double epsilon = 0.5;
  SolverOptions solver;
  unsigned threads = 1;
};

/// Applies key=value settings (same names as the CLI flags, with
/// underscores) on top of `base`.
ExperimentConfig apply_config(ExperimentConfig base, const Config& settings);

/// Canonical key=value text: identical configs give identical text.
std::string canonical_text(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<CsvCell>> rows;
};

struct ExperimentOutput {
  std::vector<Table> tables;
  /// Truncation parameters used, in run order.
  std::vector<Index> K_values;
};

/// Runs fn(0..count-1) on up to `threads` workers. Callers write results
/// into preassigned slots so output order never depends on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Column aliasing and the aliasing recovery runs.
ExperimentOutput run_aliasing(const ExperimentConfig& cfg);
/// Error against N for w_i = i^gamma over the gamma grid, Chebyshev, K = 4N.
ExperimentOutput run_weight_sweep(const ExperimentConfig& cfg);
/// Weighted l1 against fixed-rule and oracle least squares.
ExperimentOutput run_comparison(const ExperimentConfig& cfg);
/// Diagnostics reports across (N, M) and a scaling study.
ExperimentOutput run_diagnostics(const ExperimentConfig& cfg);
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// Writes <dir>/<table>.csv and a <dir>/<table>.meta sidecar per table.
void write_output(const ExperimentOutput& out, const ExperimentConfig& cfg);

struct ApproximateOptions {
  std::string basis = "legendre";
  Index K = 0;  // 0 selects 4N
  double gamma = -1.0;  // negative selects 1 (Jacobi) or 1/2 (Fourier)
  double eta = 0.0;
  bool relax_weights = false;
  WeightScheme scheme = WeightScheme::PolyGamma;
  Index eval_resolution = 10000;
  SolverOptions solver;
};

struct Approximation {
  Basis basis = Basis::legendre();
  SolveResult result;
  std::vector<double> points;
  Index K = 0;
};

/// Samples (t_n, f_n), any order; duplicates are rejected.
Approximation approximate(std::vector<std::pair<double, double>> samples,
                          const ApproximateOptions& options);
std::vector<std::pair<double, double>> read_samples(const std::string& path);
void write_evaluation_table(const std::string& path, const Approximation& approx,
                            Index resolution);

/// Point set for an experiment run: generated per the config's grid kind
/// (falling back to `default_grid`), or read from a file.
PointSet experiment_points(const ExperimentConfig& cfg, const Basis& basis, Index n,
                           const std::string& default_grid, std::uint64_t run_seed);

/// Deterministic per-run seed.
std::uint64_t run_seed(std::uint64_t seed, const std::string& tag, Index n);

/// max_n |f~(t_n) - f(t_n)|.
double interpolation_residual(const Eigen::VectorXcd& z, const Basis& basis,
                              const PointSet& ps, const std::vector<double>& values);

}  // namespace wl1
