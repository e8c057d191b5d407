#include "wl1/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "wl1/diagnostics.hpp"
#include "wl1/error.hpp"
#include "wl1/test_functions.hpp"

namespace wl1 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Data, "setting '" + key + "' expects a number, got '" + text + "'");
}

long long parse_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Data, "setting '" + key + "' expects an integer, got '" + text + "'");
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw Error(ErrorKind::Data, "setting '" + key + "' expects a boolean, got '" + text + "'");
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, std::string>) out += values[i];
    else if constexpr (std::is_floating_point_v<T>) out += format_number(values[i]);
    else out += std::to_string(values[i]);
  }
  return out;
}

std::vector<double> default_sweep_gammas() { return {0.0, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5}; }

std::vector<Index> default_n_list() { return {10, 20, 30, 40, 50, 60, 70, 80}; }

const std::vector<double>& eval_grid_for(Index resolution) {
  static std::mutex mutex;
  static std::vector<std::pair<Index, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  for (const auto& [res, grid] : cache) {
    if (res == resolution) return grid;
  }
  cache.emplace_back(resolution, chebyshev_grid(resolution));
  return cache.back().second;
}

Index truncation_for(const ExperimentConfig& cfg, Index n) {
  if (cfg.K > 0) return cfg.K;
  return std::max<Index>(1, static_cast<Index>(std::llround(cfg.k_factor * static_cast<double>(n))));
}

std::vector<double> sample_values(const RealFunction& f, const PointSet& ps, double noise,
                                  std::uint64_t seed) {
  std::vector<double> values;
  values.reserve(ps.points().size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (double t : ps.points()) {
    const double e = noise > 0.0 ? noise * unit(rng) : 0.0;
    values.push_back(f(t) + e);
  }
  return values;
}

Eigen::VectorXcd data_from_values(const PointSet& ps, const std::vector<double>& values) {
  std::vector<Complex> c(values.begin(), values.end());
  return data_vector(ps, c);
}

std::vector<TestFunction> functions_for(const ExperimentConfig& cfg, const std::string& tag) {
  if (cfg.functions.empty()) return test_functions_tagged(tag);
  std::vector<TestFunction> out;
  for (const auto& id : cfg.functions) out.push_back(find_test_function(id));
  return out;
}

/// Sign-symmetric weights for Fourier, i-indexed otherwise.
WeightVector weights_for(const Basis& basis, Index k, double gamma, bool literal_power,
                         bool relax) {
  WeightVector w;
  if (basis.is_fourier()) {
    w = make_weights(basis, k, WeightScheme::FourierGamma, gamma);
  } else if (literal_power) {
    w = make_weights(basis, k, WeightScheme::Power, gamma);
  } else {
    w = make_weights(basis, k, WeightScheme::PolyGamma, gamma);
  }
  if (!w.admissible() && !relax) {
    throw Error(ErrorKind::Domain,
                "weights " + to_string(w.scheme) + " violate w_i >= ||phi_i||_inf; pass "
                "--relax-weights to allow");
  }
  return w;
}

CsvCell cell(double v) { return v; }
CsvCell cell(Index v) { return static_cast<long long>(v); }
CsvCell cell(const std::string& v) { return v; }

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Aliasing: return "aliasing";
    case ExperimentKind::WeightSweep: return "weight_sweep";
    case ExperimentKind::CompareLegendre: return "compare_legendre";
    case ExperimentKind::CompareFourier: return "compare_fourier";
    case ExperimentKind::Diagnostics: return "diagnostics";
  }
  return "unknown";
}

ExperimentKind parse_experiment(const std::string& text) {
  if (text == "aliasing") return ExperimentKind::Aliasing;
  if (text == "weight_sweep" || text == "weight-sweep") return ExperimentKind::WeightSweep;
  if (text == "compare_legendre") return ExperimentKind::CompareLegendre;
  if (text == "compare_fourier") return ExperimentKind::CompareFourier;
  if (text == "diagnostics") return ExperimentKind::Diagnostics;
  throw Error(ErrorKind::Domain, "unknown experiment '" + text + "'");
}

ExperimentConfig apply_config(ExperimentConfig cfg, const Config& settings) {
  for (const auto& [key, value] : settings) {
    if (key == "experiment") cfg.experiment = parse_experiment(value);
    else if (key == "basis") cfg.basis = value;
    else if (key == "points") cfg.points = value;
    else if (key == "jitter_amplitude") cfg.jitter_amplitude = parse_double(key, value);
    else if (key == "n") {
      cfg.N_list.clear();
      for (const auto& s : split_list(value)) cfg.N_list.push_back(parse_integer(key, s));
    } else if (key == "gamma") {
      cfg.gamma_list.clear();
      for (const auto& s : split_list(value)) cfg.gamma_list.push_back(parse_double(key, s));
    } else if (key == "k_factor") cfg.k_factor = parse_double(key, value);
    else if (key == "k") cfg.K = parse_integer(key, value);
    else if (key == "eta") cfg.eta = parse_double(key, value);
    else if (key == "noise") cfg.noise = parse_double(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    else if (key == "out") cfg.output_dir = value;
    else if (key == "eval_resolution") cfg.eval_resolution = parse_integer(key, value);
    else if (key == "relax_weights") cfg.relax_weights = parse_bool(key, value);
    else if (key == "functions") cfg.functions = split_list(value);
    else if (key == "m") {
      cfg.M_list.clear();
      for (const auto& s : split_list(value)) cfg.M_list.push_back(parse_integer(key, s));
    } else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
    else if (key == "tol_feas") cfg.solver.tol_feas = parse_double(key, value);
    else if (key == "tol_gap") cfg.solver.tol_gap = parse_double(key, value);
    else if (key == "max_iter") cfg.solver.max_iter = parse_integer(key, value);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(parse_integer(key, value));
    else throw Error(ErrorKind::Data, "unknown setting '" + key + "'");
  }
  if (cfg.eval_resolution < 100) throw Error(ErrorKind::Domain, "eval_resolution must be >= 100");
  if (cfg.eta < 0.0) throw Error(ErrorKind::Domain, "eta must be nonnegative");
  for (Index n : cfg.N_list) {
    if (n < 1) throw Error(ErrorKind::Domain, "N values must be positive");
  }
  return cfg;
}

std::string canonical_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "experiment=" << to_string(cfg.experiment) << '\n'
      << "basis=" << cfg.basis << '\n'
      << "points=" << cfg.points << '\n'
      << "jitter_amplitude=" << format_number(cfg.jitter_amplitude) << '\n'
      << "n=" << join(cfg.N_list) << '\n'
      << "gamma=" << join(cfg.gamma_list) << '\n'
      << "k_factor=" << format_number(cfg.k_factor) << '\n'
      << "k=" << cfg.K << '\n'
      << "eta=" << format_number(cfg.eta) << '\n'
      << "noise=" << format_number(cfg.noise) << '\n'
      << "seed=" << cfg.seed << '\n'
      << "eval_resolution=" << cfg.eval_resolution << '\n'
      << "relax_weights=" << (cfg.relax_weights ? 1 : 0) << '\n'
      << "functions=" << join(cfg.functions) << '\n'
      << "m=" << join(cfg.M_list) << '\n'
      << "epsilon=" << format_number(cfg.epsilon) << '\n'
      << "tol_feas=" << format_number(cfg.solver.tol_feas) << '\n'
      << "tol_gap=" << format_number(cfg.solver.tol_gap) << '\n'
      << "max_iter=" << cfg.solver.max_iter << '\n';
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a(canonical_text(cfg)); }

std::uint64_t run_seed(std::uint64_t seed, const std::string& tag, Index n) {
  return fnv1a(std::to_string(seed) + ":" + tag + ":" + std::to_string(n));
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

PointSet experiment_points(const ExperimentConfig& cfg, const Basis& basis, Index n,
                           const std::string& default_grid, std::uint64_t seed) {
  const std::string kind = cfg.points.empty() ? default_grid : cfg.points;
  if (kind == "periodic") {
    // Equispaced on the circle: t_n = -1 + 2n/N, n = 0..N-1.
    std::vector<double> t(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n);
    return PointSet::build(t, basis);
  }
  if (kind == "equispaced" || kind == "jittered" || kind == "uniform" ||
      kind == "uniform_random" || kind == "random" || kind == "chebyshev") {
    GridSpec spec{parse_grid_kind(kind), cfg.jitter_amplitude};
    std::vector<double> t = generate_points(spec, n, seed);
    // t = -1 and t = 1 are the same node of a periodic basis.
    if (basis.is_fourier() && t.size() > 1 && t.front() == -1.0 && t.back() == 1.0) t.pop_back();
    return PointSet::build(t, basis);
  }
  std::vector<double> t = read_points_file(kind);
  std::sort(t.begin(), t.end());
  return PointSet::build(t, basis);
}

double interpolation_residual(const Eigen::VectorXcd& z, const Basis& basis,
                              const PointSet& ps, const std::vector<double>& values) {
  const Eigen::VectorXcd approx = synthesize(z, basis, ps.points());
  double r = 0.0;
  for (Index n = 0; n < approx.size(); ++n) {
    r = std::max(r, std::abs(approx(n) - values[static_cast<std::size_t>(n)]));
  }
  return r;
}

ExperimentOutput run_aliasing(const ExperimentConfig& cfg) {
  const Basis basis = Basis::fourier();
  ExperimentOutput out;

  Table columns{"aliasing_columns",
                {"N", "K", "alias_frequency", "max_column_difference", "objective_e0",
                 "objective_alias", "residual_e0", "residual_alias", "flat_objective",
                 "flat_argmax_frequency", "weighted_objective", "weighted_argmax_frequency",
                 "flat_sup_error", "weighted_sup_error"},
                {}};
  const RealFunction one = [](double) { return 1.0; };
  for (Index n : {Index{11}, Index{21}}) {
    // Equispaced with step 2/(N-1): t_n P is an integer for P = (N-1)/2.
    const PointSet ps = PointSet::build(generate_points({GridKind::Equispaced, 0.0}, n, 0), basis);
    const Index k = 4 * n;
    out.K_values.push_back(k);
    const SamplingMatrix a = SamplingMatrix::build(basis, ps, k);
    const long p = static_cast<long>((n - 1) / 2);
    const Index c0 = basis.storage_index(0);
    double diff = 0.0;
    for (long sign : {1L, -1L}) {
      const Index ca = basis.storage_index(sign * 2 * p);
      diff = std::max(diff, (a.entries().col(c0) - a.entries().col(ca)).cwiseAbs().maxCoeff());
    }
    const Eigen::VectorXcd y = data_vector(ps, one);
    const Index ca = basis.storage_index(2 * p);
    const WeightVector flat = make_weights(basis, k, WeightScheme::Unit, 0.0);
    const WeightVector grow = make_weights(basis, k, WeightScheme::FourierGamma, 0.5);
    const double res0 = (a.entries().col(c0) - y).norm();
    const double resa = (a.entries().col(ca) - y).norm();

    const SolveResult rf = solve_weighted_l1(a.entries(), y, flat.w, 0.0, ConstraintMode::Equality, cfg.solver);
    const SolveResult rw = solve_weighted_l1(a.entries(), y, grow.w, 0.0, ConstraintMode::Equality, cfg.solver);
    Index af = 0, aw = 0;
    rf.z.cwiseAbs().maxCoeff(&af);
    rw.z.cwiseAbs().maxCoeff(&aw);
    columns.rows.push_back({cell(n), cell(k), cell(Index{2 * p}), cell(diff), cell(flat.w(c0)),
                            cell(flat.w(ca)), cell(res0), cell(resa), cell(rf.objective),
                            cell(Index{basis.frequency(af)}), cell(rw.objective),
                            cell(Index{basis.frequency(aw)}),
                            cell(sup_error(one, rf.z, basis, eval_grid_for(cfg.eval_resolution))),
                            cell(sup_error(one, rw.z, basis, eval_grid_for(cfg.eval_resolution)))});
  }
  out.tables.push_back(std::move(columns));

  // Recovery of cos(pi t) exp(sin(pi t)) from N = 20 equispaced samples.
  const TestFunction& fn = find_test_function("cos_exp_sin");
  const Index n = cfg.N_list.empty() ? 20 : cfg.N_list.front();
  const PointSet ps = experiment_points(cfg, basis, n, "periodic", run_seed(cfg.seed, "grid", n));
  const Index k = truncation_for(cfg, n);
  out.K_values.push_back(k);
  const SamplingMatrix a = SamplingMatrix::build(basis, ps, k);
  const double noise = cfg.noise > 0.0 ? cfg.noise : 0.0;
  const std::vector<double> values = sample_values(fn.f, ps, noise, run_seed(cfg.seed, fn.id, n));
  const Eigen::VectorXcd y = data_from_values(ps, values);
  const std::vector<double> gammas = cfg.gamma_list.empty() ? std::vector<double>{0.0, 0.1, 0.5}
                                                            : cfg.gamma_list;
  const double eta_ineq = cfg.eta > 0.0 ? cfg.eta : 1e-2;

  struct Run {
    double gamma;
    ConstraintMode mode;
  };
  std::vector<Run> runs;
  for (ConstraintMode mode : {ConstraintMode::Equality, ConstraintMode::Inequality}) {
    for (double g : gammas) runs.push_back({g, mode});
  }
  std::vector<SolveResult> results(runs.size());
  parallel_for(runs.size(), cfg.threads, [&](std::size_t i) {
    const WeightVector w = runs[i].gamma == 0.0
                               ? make_weights(basis, k, WeightScheme::Unit, 0.0)
                               : make_weights(basis, k, WeightScheme::FourierGamma, runs[i].gamma);
    results[i] = solve_weighted_l1(a.entries(), y, w.w,
                                   runs[i].mode == ConstraintMode::Equality ? 0.0 : eta_ineq,
                                   runs[i].mode, cfg.solver);
  });

  Table recovery{"aliasing_recovery",
                 {"function", "N", "K", "gamma", "mode", "eta", "sup_error", "objective",
                  "status", "iterations", "duality_gap", "interp_residual"},
                 {}};
  const auto& grid = eval_grid_for(cfg.eval_resolution);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const bool eq = runs[i].mode == ConstraintMode::Equality;
    recovery.rows.push_back({cell(fn.id), cell(n), cell(k), cell(runs[i].gamma),
                             cell(std::string(eq ? "equality" : "inequality")),
                             cell(eq ? 0.0 : eta_ineq), cell(sup_error(fn.f, results[i].z, basis, grid)),
                             cell(results[i].objective), cell(to_string(results[i].status)),
                             cell(Index{results[i].iterations}), cell(results[i].duality_gap),
                             cell(interpolation_residual(results[i].z, basis, ps, values))});
  }
  out.tables.push_back(std::move(recovery));

  Table curves{"aliasing_curves", {"t", "f"}, {}};
  for (const auto& r : runs) {
    std::ostringstream name;
    name << (r.mode == ConstraintMode::Equality ? "eq" : "ineq") << "_gamma_" << format_number(r.gamma);
    curves.columns.push_back(name.str());
  }
  constexpr int kCurvePoints = 401;
  std::vector<double> t(kCurvePoints);
  for (int i = 0; i < kCurvePoints; ++i) t[i] = -1.0 + 2.0 * i / (kCurvePoints - 1);
  std::vector<Eigen::VectorXcd> approx;
  for (const auto& r : results) approx.push_back(synthesize(r.z, basis, t));
  for (int i = 0; i < kCurvePoints; ++i) {
    std::vector<CsvCell> row{cell(t[i]), cell(fn.f(t[i]))};
    for (const auto& v : approx) row.push_back(cell(v(i).real()));
    curves.rows.push_back(std::move(row));
  }
  out.tables.push_back(std::move(curves));
  return out;
}

ExperimentOutput run_weight_sweep(const ExperimentConfig& cfg) {
  const Basis basis = cfg.basis.empty() ? Basis::chebyshev() : Basis::parse(cfg.basis);
  const std::vector<Index> ns = cfg.N_list.empty() ? default_n_list() : cfg.N_list;
  const std::vector<double> gammas = cfg.gamma_list.empty() ? default_sweep_gammas() : cfg.gamma_list;
  const std::vector<TestFunction> fns = functions_for(cfg, "sweep");
  const double noise = cfg.noise > 0.0 ? cfg.noise : 0.0;
  const auto& grid = eval_grid_for(cfg.eval_resolution);

  ExperimentOutput out;
  std::vector<PointSet> sets;
  std::vector<SamplingMatrix> mats;
  for (Index n : ns) {
    sets.push_back(experiment_points(cfg, basis, n, "equispaced", run_seed(cfg.seed, "grid", n)));
    const Index k = truncation_for(cfg, n);
    mats.push_back(SamplingMatrix::build(basis, sets.back(), k));
    out.K_values.push_back(k);
  }

  const std::size_t per_fn = gammas.size() * ns.size();
  const std::size_t total = fns.size() * per_fn;
  std::vector<std::vector<CsvCell>> rows(total);
  parallel_for(total, cfg.threads, [&](std::size_t idx) {
    const TestFunction& fn = fns[idx / per_fn];
    const std::size_t gi = (idx % per_fn) / ns.size();
    const std::size_t ni = idx % ns.size();
    const PointSet& ps = sets[ni];
    const SamplingMatrix& a = mats[ni];
    const Index k = a.cols();
    const double g = gammas[gi];
    std::string scheme = "-";
    Index violations = 0;
    try {
      const WeightVector w = weights_for(basis, k, g, cfg.relax_weights, cfg.relax_weights);
      scheme = to_string(w.scheme);
      violations = static_cast<Index>(w.violations.size());
      const std::vector<double> values =
          sample_values(fn.f, ps, noise, run_seed(cfg.seed, fn.id, ps.size()));
      const Eigen::VectorXcd y = data_from_values(ps, values);
      const SolveResult r = solve_weighted_l1(a.entries(), y, w.w, 0.0, ConstraintMode::Equality, cfg.solver);
      rows[idx] = {cell(fn.id), cell(g), cell(ps.size()), cell(k), cell(scheme), cell(violations),
                   cell(sup_error(fn.f, r.z, basis, grid)), cell(to_string(r.status)),
                   cell(Index{r.iterations}), cell(r.objective), cell(r.duality_gap),
                   cell(interpolation_residual(r.z, basis, ps, values))};
    } catch (const Error& e) {
      rows[idx] = {cell(fn.id), cell(g), cell(ps.size()), cell(k), cell(scheme), cell(violations),
                   cell(kNaN), cell(std::string("failed:") + to_string(e.kind())), cell(Index{0}),
                   cell(kNaN), cell(kNaN), cell(kNaN)};
    }
  });
  out.tables.push_back({"weight_sweep",
                        {"function", "gamma", "N", "K", "weights", "violations", "sup_error",
                         "status", "iterations", "objective", "duality_gap", "interp_residual"},
                        std::move(rows)});
  return out;
}

ExperimentOutput run_comparison(const ExperimentConfig& cfg) {
  const bool fourier = cfg.experiment == ExperimentKind::CompareFourier ||
                       (!cfg.basis.empty() && Basis::parse(cfg.basis).is_fourier());
  const Basis basis = fourier ? Basis::fourier()
                              : (cfg.basis.empty() ? Basis::legendre() : Basis::parse(cfg.basis));
  const std::vector<Index> ns = cfg.N_list.empty() ? default_n_list() : cfg.N_list;
  const std::vector<TestFunction> fns = functions_for(cfg, fourier ? "fourier" : "legendre");
  const std::vector<double> cs = fourier ? std::vector<double>{1.0 / 6, 0.25, 0.5, 2.0 / 3, 0.75, 5.0 / 6}
                                         : std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  const double gamma = cfg.gamma_list.empty() ? (fourier ? 0.5 : 1.0) : cfg.gamma_list.front();
  const double noise = cfg.noise >= 0.0 ? cfg.noise : 1e-8;
  const std::string default_grid = fourier ? "jittered" : "equispaced";
  const auto& grid = eval_grid_for(cfg.eval_resolution);

  ExperimentOutput out;
  std::vector<PointSet> sets;
  std::vector<SamplingMatrix> mats;
  std::vector<WeightVector> weights;
  for (Index n : ns) {
    sets.push_back(experiment_points(cfg, basis, n, default_grid, run_seed(cfg.seed, "grid", n)));
    const Index k = truncation_for(cfg, n);
    mats.push_back(SamplingMatrix::build(basis, sets.back(), k));
    // w_i = i (w_i = i^gamma) for Jacobi, w_j = 1 + |j|^gamma for Fourier.
    weights.push_back(weights_for(basis, k, gamma, true, cfg.relax_weights));
    out.K_values.push_back(k);
  }

  const std::size_t total = fns.size() * ns.size();
  std::vector<std::vector<std::vector<CsvCell>>> blocks(total);
  parallel_for(total, cfg.threads, [&](std::size_t idx) {
    const TestFunction& fn = fns[idx / ns.size()];
    const std::size_t ni = idx % ns.size();
    const PointSet& ps = sets[ni];
    const SamplingMatrix& a = mats[ni];
    const Index n = ps.size();
    const std::vector<double> values = sample_values(fn.f, ps, noise, run_seed(cfg.seed, fn.id, n));
    const Eigen::VectorXcd y = data_from_values(ps, values);
    auto& rows = blocks[idx];

    const ConstraintMode mode = cfg.eta > 0.0 ? ConstraintMode::Inequality : ConstraintMode::Equality;
    const SolveResult r = solve_weighted_l1(a.entries(), y, weights[ni].w, cfg.eta, mode, cfg.solver);
    rows.push_back({cell(fn.id), cell(n), cell(std::string("l1")), cell(kNaN), cell(a.cols()),
                    cell(sup_error(fn.f, r.z, basis, grid)), cell(to_string(r.status)),
                    cell(Index{r.iterations})});
    for (double c : cs) {
      const double scale = fourier ? static_cast<double>(n) : std::sqrt(static_cast<double>(n));
      const Index m = std::clamp<Index>(static_cast<Index>(std::llround(c * scale)), 1,
                                        std::min(n, a.cols()));
      const Eigen::VectorXcd z = solve_least_squares(a.entries(), y, m);
      rows.push_back({cell(fn.id), cell(n), cell(std::string("ls")), cell(c), cell(m),
                      cell(sup_error(fn.f, z, basis, grid)), cell(std::string("-")), cell(Index{0})});
    }
    const OracleFit oracle = oracle_least_squares(a, y, fn.f, grid);
    rows.push_back({cell(fn.id), cell(n), cell(std::string("oracle_ls")), cell(kNaN),
                    cell(oracle.M), cell(oracle.error), cell(std::string("-")), cell(Index{0})});
  });

  Table table{fourier ? "compare_fourier" : "compare_legendre",
              {"function", "N", "method", "c", "M", "error", "status", "iterations"},
              {}};
  for (auto& block : blocks) {
    for (auto& row : block) table.rows.push_back(std::move(row));
  }
  out.tables.push_back(std::move(table));
  return out;
}

ExperimentOutput run_diagnostics(const ExperimentConfig& cfg) {
  const Basis basis = cfg.basis.empty() ? Basis::legendre() : Basis::parse(cfg.basis);
  const std::vector<Index> ns = cfg.N_list.empty() ? std::vector<Index>{20, 40, 80, 160} : cfg.N_list;
  const std::vector<Index> ms = cfg.M_list.empty() ? std::vector<Index>{2, 4, 8} : cfg.M_list;
  const double gamma = cfg.gamma_list.empty() ? (basis.is_fourier() ? 0.5 : 1.0) : cfg.gamma_list.front();
  const std::string fn_id = cfg.functions.empty()
                                ? (basis.is_fourier() ? std::string("cos_exp_sin") : std::string("runge25"))
                                : cfg.functions.front();
  const TestFunction& fn = find_test_function(fn_id);
  const std::string default_grid = "equispaced";

  ExperimentOutput out;
  std::vector<PointSet> sets;
  std::vector<Index> ks;
  for (Index n : ns) {
    sets.push_back(experiment_points(cfg, basis, n, default_grid, run_seed(cfg.seed, "grid", n)));
    ks.push_back(cfg.K > 0 ? cfg.K : choose_K(basis, sets.back(), cfg.epsilon).K);
    out.K_values.push_back(ks.back());
  }

  struct Job {
    std::size_t ni;
    Index m;
  };
  std::vector<Job> jobs;
  for (std::size_t ni = 0; ni < sets.size(); ++ni) {
    for (Index m : ms) {
      const double h = sets[ni].h(), md = static_cast<double>(m);
      const bool admissible = basis.is_fourier() ? h * md <= 1.0 : h * md * md <= 1.0;
      if (admissible) jobs.push_back({ni, m});
    }
  }
  std::vector<DiagnosticsReport> reports(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
    ReportOptions opt;
    opt.M = jobs[j].m;
    opt.K = ks[jobs[j].ni];
    opt.scheme = basis.is_fourier() ? WeightScheme::FourierGamma : WeightScheme::PolyGamma;
    opt.gamma = gamma;
    opt.f = fn.f;
    reports[j] = build_report(basis, sets[jobs[j].ni], opt);
  });
  Table table{"diagnostics", report_columns(), {}};
  for (const auto& r : reports) {
    std::vector<CsvCell> row;
    for (double v : report_values(r)) row.push_back(v);
    table.rows.push_back(std::move(row));
  }
  out.tables.push_back(std::move(table));

  Table scaling{"diagnostics_scaling", {"M", "N", "h", "E2", "Einf", "F", "admissible"}, {}};
  Table fits{"diagnostics_fits", {"M", "slope_E2", "slope_Einf", "slope_F", "fitted_rows"}, {}};
  const std::string kind = cfg.points.empty() ? default_grid : cfg.points;
  GridSpec spec{parse_grid_kind(kind == "periodic" ? "equispaced" : kind), cfg.jitter_amplitude};
  for (Index m : ms) {
    const ScalingStudy study = scaling_study(basis, spec, m, ns, cfg.seed);
    for (const auto& row : study.rows) {
      scaling.rows.push_back({cell(m), cell(row.N), cell(row.h), cell(row.E2), cell(row.Einf),
                              cell(row.F), cell(Index{row.admissible ? 1 : 0})});
    }
    fits.rows.push_back({cell(m), cell(study.slope_E2), cell(study.slope_Einf),
                         cell(study.slope_F), cell(study.fitted_rows)});
  }
  out.tables.push_back(std::move(scaling));
  out.tables.push_back(std::move(fits));
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::Aliasing: return run_aliasing(cfg);
    case ExperimentKind::WeightSweep: return run_weight_sweep(cfg);
    case ExperimentKind::CompareLegendre:
    case ExperimentKind::CompareFourier: return run_comparison(cfg);
    case ExperimentKind::Diagnostics: return run_diagnostics(cfg);
  }
  throw Error(ErrorKind::Unsupported, "unknown experiment");
}

void write_output(const ExperimentOutput& out, const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + cfg.output_dir + ": " + ec.message());
  const std::string hash = hex64(config_hash(cfg));
  for (const auto& table : out.tables) {
    const fs::path csv_path = fs::path(cfg.output_dir) / (table.name + ".csv");
    std::ofstream csv(csv_path);
    if (!csv) throw Error(ErrorKind::Io, "cannot write " + csv_path.string());
    CsvWriter writer(csv, table.columns);
    for (const auto& row : table.rows) writer.row(row);

    const fs::path meta_path = fs::path(cfg.output_dir) / (table.name + ".meta");
    std::ofstream meta(meta_path);
    if (!meta) throw Error(ErrorKind::Io, "cannot write " + meta_path.string());
    meta << "table=" << table.name << '\n'
         << "config_hash=" << hash << '\n'
         << "seed=" << cfg.seed << '\n'
         << "tol_feas=" << format_number(cfg.solver.tol_feas) << '\n'
         << "tol_gap=" << format_number(cfg.solver.tol_gap) << '\n'
         << "max_iter=" << cfg.solver.max_iter << '\n'
         << "K=" << join(out.K_values) << '\n'
         << "rows=" << table.rows.size() << '\n'
         << "# config\n"
         << canonical_text(cfg);
  }
}

Approximation approximate(std::vector<std::pair<double, double>> samples,
                          const ApproximateOptions& options) {
  if (samples.empty()) throw Error(ErrorKind::Empty, "no samples");
  std::sort(samples.begin(), samples.end());
  Approximation approx;
  approx.basis = Basis::parse(options.basis);
  std::vector<double> t, values;
  for (const auto& [tn, yn] : samples) {
    t.push_back(tn);
    values.push_back(yn);
  }
  const PointSet ps = PointSet::build(t, approx.basis);
  approx.points = t;
  approx.K = options.K > 0 ? options.K : 4 * ps.size();
  const double gamma = options.gamma >= 0.0 ? options.gamma : (approx.basis.is_fourier() ? 0.5 : 1.0);
  const WeightVector w = approx.basis.is_fourier()
                             ? make_weights(approx.basis, approx.K, WeightScheme::FourierGamma, gamma)
                             : make_weights(approx.basis, approx.K, options.scheme, gamma);
  if (!w.admissible() && !options.relax_weights) {
    throw Error(ErrorKind::Domain, "weights violate w_i >= ||phi_i||_inf; use --relax-weights");
  }
  const SamplingMatrix a = SamplingMatrix::build(approx.basis, ps, approx.K);
  const Eigen::VectorXcd y = data_from_values(ps, values);
  approx.result = solve_weighted_l1(a.entries(), y, w.w, options.eta,
                                    options.eta > 0.0 ? ConstraintMode::Inequality : ConstraintMode::Equality,
                                    options.solver);
  return approx;
}

std::vector<std::pair<double, double>> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::vector<std::pair<double, double>> samples;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double t = 0.0, y = 0.0;
    if (!(fields >> t >> y)) throw Error(ErrorKind::Data, "malformed sample line: " + line);
    samples.emplace_back(t, y);
  }
  return samples;
}

void write_evaluation_table(const std::string& path, const Approximation& approx,
                            Index resolution) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  const std::vector<double> t = chebyshev_grid(resolution);
  const Eigen::VectorXcd v = synthesize(approx.result.z, approx.basis, t);
  CsvWriter csv(out, {"t", "re", "im"});
  for (std::size_t i = 0; i < t.size(); ++i) {
    csv.row(std::vector<double>{t[i], v(static_cast<Index>(i)).real(), v(static_cast<Index>(i)).imag()});
  }
}

}  // namespace wl1
