#include "velpert/cli.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "velpert/errors.hpp"
#include "velpert/io.hpp"
#include "velpert/oracles.hpp"
#include "velpert/perturbation.hpp"
#include "velpert/problem.hpp"

namespace velpert::cli {

namespace {

constexpr int kDefaultSamples = 201;
constexpr int kDefaultFdGrid = 512;

SpectralOptions spectral_options(const RunConfig& cfg) { return {.tol_rel = cfg.tol_rel}; }

PerturbationSeries series_from_problem(const RunConfig& cfg) {
  const PerturbationProblem problem = load_problem_file(cfg.problem_path);
  const SpectralOptions opts = spectral_options(cfg);
  const UnperturbedState state = default_state(problem, cfg.n, cfg.amplitude, opts);
  return compute_series(problem, state, cfg.order, opts);
}

std::vector<double> uniform_grid(const Interval& dom, int points) {
  if (points < 2) throw ConfigError("--grid must be at least 2 for sampling");
  std::vector<double> x(points);
  for (int i = 0; i < points; ++i) x[i] = dom.a + dom.length() * i / (points - 1);
  x.back() = dom.b;
  return x;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
  } else {
    write_text_file(cfg.out_path, text);
  }
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const PerturbationSeries series = series_from_problem(cfg);
  std::ostringstream table;
  table << "j\tE_j\tN_j\n";
  for (int j = 0; j <= series.max_order(); ++j) {
    table << j << '\t' << format_number(series.orders[j].E) << '\t' << format_number(series.norm[j]) << '\n';
  }
  if (cfg.format == "csv") {
    std::ostringstream csv;
    csv << "j,E,N\n";
    for (int j = 0; j <= series.max_order(); ++j) {
      csv << j << ',' << format_number(series.orders[j].E) << ',' << format_number(series.norm[j]) << '\n';
    }
    if (!cfg.out_path.empty()) write_text_file(cfg.out_path, csv.str());
  } else if (!cfg.out_path.empty()) {
    write_text_file(cfg.out_path, dump(to_json(series)));
  }
  out << table.str();
  return kSuccess;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const PerturbationSeries series = load_series_file(cfg.series_path);
  std::ostringstream text;
  text << "# lambda = " << format_number(cfg.lambda) << '\n';
  text << "order\tE\n";
  for (int j = 0; j <= series.max_order(); ++j) {
    text << j << '\t' << format_number(sum_series(series, cfg.lambda, j, false).E) << '\n';
  }
  if (cfg.normalize) {
    const SummedSeries sum = sum_series(series, cfg.lambda, series.max_order(), true);
    text << "x\ty\n";
    for (double x : uniform_grid(sum.y.domain(), cfg.grid.value_or(kDefaultSamples))) {
      text << format_number(x) << '\t' << format_number(sum.y(x)) << '\n';
    }
  }
  emit(cfg, out, text.str());
  return kSuccess;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const PerturbationProblem problem = load_problem_file(cfg.problem_path);
  std::optional<PerturbationSeries> series;
  if (!cfg.series_path.empty()) series = load_series_file(cfg.series_path);

  double guess = 0.0;
  if (cfg.guess) {
    guess = *cfg.guess;
  } else if (series) {
    guess = sum_series(*series, cfg.lambda, series->max_order(), false).E;
  } else {
    guess = default_state(problem, cfg.n, cfg.amplitude, spectral_options(cfg)).E0;
  }
  const int M = cfg.grid.value_or(kDefaultFdGrid);
  const double E = oracles::fd_eigenvalue(problem, cfg.lambda, guess, M);
  out << "eigenvalue\t" << format_number(E) << '\n';
  if (series) {
    const double sum = sum_series(*series, cfg.lambda, series->max_order(), false).E;
    out << "series_sum\t" << format_number(sum) << '\n';
    out << "deviation\t" << format_number(sum - E) << '\n';
  }
  return kSuccess;
}

int cmd_export(const RunConfig& cfg, std::ostream& out) {
  const PerturbationSeries series =
      cfg.series_path.empty() ? series_from_problem(cfg) : load_series_file(cfg.series_path);
  if (cfg.format == "json") {
    emit(cfg, out, dump(to_json(series)));
    return kSuccess;
  }
  const double scale = series.state.user_norm;
  const auto xs = uniform_grid(series.state.y0.domain(), cfg.grid.value_or(kDefaultSamples));
  std::ostringstream csv;
  if (cfg.lambda_given) {
    const SummedSeries sum = sum_series(series, cfg.lambda, series.max_order(), cfg.normalize);
    const double factor = cfg.normalize ? 1.0 : scale;
    csv << "x,y_sum\n";
    for (double x : xs) csv << format_number(x) << ',' << format_number(factor * sum.y(x)) << '\n';
  } else {
    csv << 'x';
    for (int j = 0; j <= series.max_order(); ++j) csv << ",y" << j;
    csv << '\n';
    for (double x : xs) {
      csv << format_number(x);
      for (const Order& o : series.orders) csv << ',' << format_number(scale * o.y(x));
      csv << '\n';
    }
  }
  emit(cfg, out, csv.str());
  return kSuccess;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const PerturbationProblem problem = load_problem_file(cfg.problem_path);
  const SpectralOptions opts = spectral_options(cfg);
  const UnperturbedState state = default_state(problem, cfg.n, cfg.amplitude, opts);
  const ResidualReport report = validate_state(problem, state);
  const bool ok = state_is_valid(state, report);
  out << "n\t" << state.n << '\n';
  out << "E0\t" << format_number(state.E0) << '\n';
  out << "ode_residual\t" << format_number(report.ode) << '\n';
  out << "y0(a)\t" << format_number(report.left) << '\n';
  out << "y0(b)\t" << format_number(report.right) << '\n';
  const GhostFunction g = ghost(state, problem.v0, opts);
  out << "wronskian_defect\t" << format_number(wronskian_defect(g, state)) << '\n';
  out << (ok ? "valid" : "INVALID") << '\n';
  return ok ? kSuccess : kComputeError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Perturbation expansions for two-point eigenvalue problems with derivative couplings", "velpert"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol-rel", cfg.tol_rel, "Relative Chebyshev tail tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };
  auto add_state = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "Quantum number of the unperturbed state")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--amplitude", cfg.amplitude, "Amplitude of the sine unperturbed state (default: unit norm)")
        ->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "Compute the perturbation series");
  solve->add_option("--problem", cfg.problem_path, "Problem file")->required();
  add_state(solve);
  solve->add_option("--order", cfg.order, "Highest order J")->check(CLI::NonNegativeNumber)->capture_default_str();
  solve->add_option("--out", cfg.out_path, "Write the series (json) or the table (csv) here");
  solve->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  add_common(solve);

  auto* eval = app.add_subcommand("eval", "Partial sums of a stored series");
  eval->add_option("--series", cfg.series_path, "Series file written by solve")->required();
  eval->add_option("--lambda", cfg.lambda, "Perturbation parameter")->capture_default_str();
  eval->add_flag("--normalize", cfg.normalize, "Also print the normalized wavefunction");
  eval->add_option("--grid", cfg.grid, "Wavefunction sample count")->check(CLI::PositiveNumber);
  eval->add_option("--out", cfg.out_path, "Write output here instead of stdout");

  auto* oracle = app.add_subcommand("oracle", "Finite-difference reference eigenvalue");
  oracle->add_option("--problem", cfg.problem_path, "Problem file")->required();
  oracle->add_option("--series", cfg.series_path, "Series file to compare against");
  oracle->add_option("--lambda", cfg.lambda, "Perturbation parameter")->capture_default_str();
  oracle->add_option("--guess", cfg.guess, "Eigenvalue guess (default: series sum or E0)");
  oracle->add_option("--grid", cfg.grid, "Interior grid points M (M and 2M are used)")->check(CLI::Range(16, 1 << 24));
  add_state(oracle);
  add_common(oracle);

  auto* exp = app.add_subcommand("export", "Sample corrections or the summed wavefunction");
  exp->add_option("--problem", cfg.problem_path, "Problem file");
  exp->add_option("--series", cfg.series_path, "Series file (instead of --problem)");
  add_state(exp);
  exp->add_option("--order", cfg.order, "Highest order J")->check(CLI::NonNegativeNumber)->capture_default_str();
  auto* lambda_opt = exp->add_option("--lambda", cfg.lambda, "Export the summed wavefunction at this lambda");
  exp->add_flag("--normalize", cfg.normalize, "Normalize the summed wavefunction");
  exp->add_option("--grid", cfg.grid, "Sample count")->check(CLI::PositiveNumber);
  exp->add_option("--out", cfg.out_path, "Write output here instead of stdout");
  exp->add_option("--format", cfg.format, "csv (samples) or json (series)")->check(CLI::IsMember({"json", "csv"}));
  add_common(exp);

  auto* validate = app.add_subcommand("validate", "Check the unperturbed state and its ghost function");
  validate->add_option("--problem", cfg.problem_path, "Problem file")->required();
  add_state(validate);
  add_common(validate);

  std::vector<std::string> argv_store{"velpert"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg, out);
    if (eval->parsed()) return cmd_eval(cfg, out);
    if (oracle->parsed()) return cmd_oracle(cfg, out);
    if (exp->parsed()) {
      cfg.lambda_given = lambda_opt->count() > 0;
      if (cfg.problem_path.empty() == cfg.series_path.empty()) {
        err << "export: give exactly one of --problem or --series\n";
        return kUsageError;
      }
      return cmd_export(cfg, out);
    }
    if (validate->parsed()) return cmd_validate(cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputeError;
  }
  return kUsageError;
}

}  // namespace velpert::cli
