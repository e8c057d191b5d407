#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "wl1/error.hpp"
#include "wl1/experiments.hpp"
#include "wl1/solver.hpp"
#include "wl1/table.hpp"

namespace {

// Flag name -> config key. Every flag is collected as text and applied
// through the same path as a config file, so both accept identical values.
const std::map<std::string, std::string>& flag_keys() {
  static const std::map<std::string, std::string> keys = {
      {"basis", "basis"},
      {"points", "points"},
      {"jitter-amplitude", "jitter_amplitude"},
      {"n", "n"},
      {"k", "k"},
      {"k-factor", "k_factor"},
      {"gamma", "gamma"},
      {"eta", "eta"},
      {"noise", "noise"},
      {"seed", "seed"},
      {"out", "out"},
      {"eval-resolution", "eval_resolution"},
      {"functions", "functions"},
      {"m", "m"},
      {"epsilon", "epsilon"},
      {"threads", "threads"},
      {"max-iter", "max_iter"},
      {"tol-feas", "tol_feas"},
      {"tol-gap", "tol_gap"},
  };
  return keys;
}

struct FlagValues {
  std::map<std::string, std::string> text;
  bool relax = false;
  std::string config_path;
};

void add_common_flags(CLI::App* app, FlagValues& values) {
  for (const auto& [flag, key] : flag_keys()) {
    app->add_option("--" + flag, values.text[flag]);
  }
  app->add_flag("--relax-weights", values.relax,
                "allow weights below the sup norm of the basis functions");
  app->add_option("--config", values.config_path, "key=value settings file");
}

wl1::ExperimentConfig build_config(const CLI::App* app, const FlagValues& values,
                                   wl1::ExperimentKind kind) {
  wl1::ExperimentConfig cfg;
  cfg.experiment = kind;
  if (!values.config_path.empty()) {
    wl1::Config file = wl1::read_config_file(values.config_path);
    file.erase("experiment");
    cfg = wl1::apply_config(cfg, file);
  }
  wl1::Config flags;
  for (const auto& [flag, key] : flag_keys()) {
    if (app->count("--" + flag) > 0) flags[key] = values.text.at(flag);
  }
  if (values.relax) flags["relax_weights"] = "1";
  return wl1::apply_config(cfg, flags);
}

int run(const wl1::ExperimentConfig& cfg) {
  const wl1::ExperimentOutput out = wl1::run_experiment(cfg);
  wl1::write_output(out, cfg);
  for (const auto& table : out.tables) {
    std::cout << (std::filesystem::path(cfg.output_dir) / (table.name + ".csv")).string() << " ("
              << table.rows.size() << " rows)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted l1 approximation from scattered samples"};
  app.require_subcommand(1);

  FlagValues aliasing_flags, sweep_flags, compare_flags, diag_flags;
  CLI::App* aliasing = app.add_subcommand("aliasing", "Fourier column aliasing and recovery");
  add_common_flags(aliasing, aliasing_flags);
  CLI::App* sweep = app.add_subcommand("weight-sweep", "error against N over a gamma grid");
  add_common_flags(sweep, sweep_flags);
  CLI::App* compare = app.add_subcommand("compare", "weighted l1 against least squares");
  add_common_flags(compare, compare_flags);
  CLI::App* diag = app.add_subcommand("diagnostics", "E, F, sigma and certificate reports");
  add_common_flags(diag, diag_flags);

  CLI::App* approx = app.add_subcommand("approximate", "fit a sample file");
  std::string samples_path, approx_out = ".", approx_basis = "legendre", approx_scheme;
  wl1::Index approx_k = 0, approx_res = 10000;
  double approx_gamma = -1.0, approx_eta = 0.0;
  bool approx_relax = false;
  long approx_max_iter = 200000;
  approx->add_option("samples", samples_path, "two-column file of t and y")->required();
  approx->add_option("--basis", approx_basis);
  approx->add_option("--k", approx_k);
  approx->add_option("--gamma", approx_gamma);
  approx->add_option("--eta", approx_eta);
  approx->add_option("--weights", approx_scheme, "poly_gamma, unit or power");
  approx->add_option("--out", approx_out);
  approx->add_option("--eval-resolution", approx_res);
  approx->add_option("--max-iter", approx_max_iter);
  approx->add_flag("--relax-weights", approx_relax);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (aliasing->parsed()) {
      return run(build_config(aliasing, aliasing_flags, wl1::ExperimentKind::Aliasing));
    }
    if (sweep->parsed()) {
      return run(build_config(sweep, sweep_flags, wl1::ExperimentKind::WeightSweep));
    }
    if (compare->parsed()) {
      wl1::ExperimentConfig cfg = build_config(compare, compare_flags, wl1::ExperimentKind::CompareLegendre);
      if (!cfg.basis.empty() && wl1::Basis::parse(cfg.basis).is_fourier()) {
        cfg.experiment = wl1::ExperimentKind::CompareFourier;
      }
      return run(cfg);
    }
    if (diag->parsed()) {
      return run(build_config(diag, diag_flags, wl1::ExperimentKind::Diagnostics));
    }
    if (approx->parsed()) {
      wl1::ApproximateOptions opts;
      opts.basis = approx_basis;
      opts.K = approx_k;
      opts.gamma = approx_gamma;
      opts.eta = approx_eta;
      opts.relax_weights = approx_relax;
      opts.eval_resolution = approx_res;
      opts.solver.max_iter = approx_max_iter;
      if (!approx_scheme.empty()) opts.scheme = wl1::parse_weight_scheme(approx_scheme);
      const wl1::Approximation fit = wl1::approximate(wl1::read_samples(samples_path), opts);
      std::filesystem::create_directories(approx_out);
      const auto dir = std::filesystem::path(approx_out);
      std::ofstream coeffs(dir / "coefficients.txt");
      if (!coeffs) throw wl1::Error(wl1::ErrorKind::Io, "cannot write coefficients.txt");
      wl1::write_result(coeffs, fit.result);
      wl1::write_evaluation_table((dir / "evaluation.csv").string(), fit, approx_res);
      std::cout << "status " << wl1::to_string(fit.result.status) << ", K " << fit.K
                << ", objective " << wl1::format_number(fit.result.objective) << '\n';
      return fit.result.status == wl1::SolveStatus::Converged ? 0 : 3;
    }
  } catch (const wl1::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
