// Command-line front end: fit / gen / validate / propagate.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bpreg/config.hpp"
#include "bpreg/csv.hpp"
#include "bpreg/oracle.hpp"
#include "bpreg/propagator.hpp"
#include "bpreg/sde.hpp"
#include "bpreg/solver.hpp"

using namespace bpreg;

namespace {

struct Overrides {
  std::optional<std::string> penalty, basis, init;
  std::optional<double> lambda, alpha, p, tol, noise_scale;
  std::optional<int> max_sweeps, paths, group_size;
  std::optional<std::uint64_t> seed;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--penalty", ov.penalty,
                  "penalty family (lasso, ridge, lpnorm, elasticnet, fusedlasso, "
                  "bridge, grouplasso, splinecubic)");
  cmd->add_option("--lambda", ov.lambda, "penalty scale lambda_star");
  cmd->add_option("--alpha", ov.alpha, "mixing weight (elasticnet / fusedlasso)");
  cmd->add_option("--p", ov.p, "lpnorm exponent");
  cmd->add_option("--group-size", ov.group_size, "grouplasso block size");
  cmd->add_option("--basis", ov.basis, "covariate basis: identity or cubic");
  cmd->add_option("--tol", ov.tol, "convergence tolerance");
  cmd->add_option("--max-sweeps", ov.max_sweeps, "coordinate sweep limit");
  cmd->add_option("--init", ov.init, "initializer: zero, ols or warm");
  cmd->add_option("--seed", ov.seed, "random seed");
  cmd->add_option("--paths", ov.paths, "number of simulated paths");
  cmd->add_option("--noise-scale", ov.noise_scale, "error-term scale for gen");
}

Config resolve_config(const std::optional<std::string>& config_path, const Overrides& ov) {
  Config cfg = config_path ? Config::from_file(*config_path) : Config::defaults();
  if (ov.penalty) cfg.set("penalty", *ov.penalty);
  if (ov.lambda) cfg.set("lambda", format_double(*ov.lambda));
  if (ov.alpha) cfg.set("alpha", format_double(*ov.alpha));
  if (ov.p) cfg.set("p", format_double(*ov.p));
  if (ov.group_size) cfg.set("group_size", std::to_string(*ov.group_size));
  if (ov.basis) cfg.set("basis", *ov.basis);
  if (ov.tol) cfg.set("tol", format_double(*ov.tol));
  if (ov.max_sweeps) cfg.set("max_sweeps", std::to_string(*ov.max_sweeps));
  if (ov.init) cfg.set("init", *ov.init);
  if (ov.seed) cfg.set("seed", std::to_string(*ov.seed));
  if (ov.paths) cfg.set("paths", std::to_string(*ov.paths));
  if (ov.noise_scale) cfg.set("noise_scale", format_double(*ov.noise_scale));
  return cfg;
}

int cmd_fit(const std::string& panel_path, const std::optional<std::string>& config_path,
            const Overrides& ov, const std::string& out_path,
            const std::string& report_path) {
  const Config cfg = resolve_config(config_path, ov);
  const Panel panel = read_panel_csv(panel_path);
  cfg.penalty.validate(panel.n_covariates());

  auto [fit, report] = fit_path(panel, cfg.penalty, cfg.basis, cfg.solve);
  write_betas_csv(out_path, fit);

  std::ofstream rep(report_path);
  if (!rep) throw ConfigError("cannot write '" + report_path + "'");
  rep << "penalty: " << family_name(cfg.penalty.family) << "\n";
  rep << "lambda_star: " << format_double(cfg.penalty.lambda_star) << "\n";
  rep << "basis: " << basis_name(cfg.basis) << "\n";
  rep << "grid points: " << panel.n_times() << ", cases: " << panel.n_cases()
      << ", covariates: " << panel.n_covariates() << "\n";
  rep << "objective integral: " << format_double(report.objective_integral) << "\n";
  int n_conv = 0;
  for (size_t t = 0; t < report.points.size(); ++t) {
    const auto& pt = report.points[t];
    n_conv += pt.converged ? 1 : 0;
    rep << "t=" << format_double(fit.grid[static_cast<int>(t)])
        << " converged=" << (pt.converged ? 1 : 0) << " sweeps=" << pt.sweeps
        << " max_foc_residual=" << format_double(pt.max_residual);
    if (!pt.note.empty()) rep << " note=" << pt.note;
    rep << "\n";
  }
  rep << "converged points: " << n_conv << "/" << report.points.size() << "\n";
  return report.all_converged ? 0 : 2;
}

int cmd_gen(const std::optional<std::string>& config_path, const Overrides& ov,
            const std::string& out_path, const std::string& truth_path) {
  const Config cfg = resolve_config(config_path, ov);
  const CoefPath truth = cfg.true_path();
  cfg.penalty.validate(cfg.n_covariates);

  const std::vector<Mat> x =
      random_covariates(truth.grid, cfg.n_cases, cfg.n_covariates, cfg.seed);
  const Panel panel =
      generate_panel(truth, x, cfg.penalty, cfg.basis, cfg.seed, cfg.noise_scale, cfg.u0);

  std::vector<std::string> comments = {
      "N=" + std::to_string(cfg.n_cases) + " J=" + std::to_string(cfg.n_covariates),
      "grid: n_times=" + std::to_string(cfg.n_times) +
          " t_max=" + format_double(cfg.t_max),
      "penalty=" + family_name(cfg.penalty.family) +
          " lambda=" + format_double(cfg.penalty.lambda_star) +
          " basis=" + basis_name(cfg.basis),
      "seed=" + std::to_string(cfg.seed) +
          " noise_scale=" + format_double(cfg.noise_scale)};
  write_panel_csv(out_path, panel, comments);
  write_truth_csv(truth_path, truth, comments);
  return 0;
}

int cmd_validate(const std::string& family, int n, std::uint64_t seed, const Overrides& ov) {
  PenaltySpec spec;
  spec.family = family_from_name(family);
  spec.lambda_star = ov.lambda ? *ov.lambda : 0.05;
  if (ov.alpha) spec.alpha = *ov.alpha;
  if (ov.p) spec.p = *ov.p;
  if (ov.group_size) spec.group_size = *ov.group_size;
  if (spec.family == Family::GroupLasso && !ov.group_size) spec.group_size = 2;
  const BasisKind basis = ov.basis ? basis_from_name(*ov.basis) : BasisKind::Identity;
  const auto rep = validate_family(spec, basis, n, seed);
  std::cout << rep.to_text();
  return 0;
}

int cmd_propagate(const std::string& f_name, double c, double epsilon, int steps,
                  double x_min, double x_max, int nodes) {
  std::function<double(double)> f;
  if (f_name == "zero") f = [](double) { return 0.0; };
  else if (f_name == "const") f = [c](double) { return c; };
  else if (f_name == "square") f = [](double x) { return x * x; };
  else throw ConfigError("propagate: unknown f '" + f_name + "' (zero, const, square)");
  if (steps < 1) throw ConfigError("propagate: steps must be >= 1");

  WaveGrid w = WaveGrid::uniform(x_min, x_max, nodes,
                                 [](double x) { return std::exp(-0.5 * x * x) + 0.05; });
  std::cout << "step,s,residual\n";
  for (int k = 1; k <= steps; ++k) {
    WaveGrid next = transition_step(w, f, epsilon);
    const double r = schrodinger_residual(w, next, f, epsilon);
    std::cout << k << ',' << format_double(next.s) << ',' << format_double(r) << "\n";
    w = std::move(next);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"penalized functional regression toolkit"};
  app.require_subcommand(1);

  Overrides ov;
  std::optional<std::string> config_path;
  std::string panel_path, out_path = "betas.csv", report_path = "report.txt";
  std::string gen_out = "panel.csv", truth_path = "truth.csv";
  std::string family = "ridge", f_name = "zero";
  int n_val = 100, steps = 10, nodes = 201;
  
  double epsilon = 0.01, x_min = -3.0, x_max = 3.0, f_const = 1.0;

  auto* fit = app.add_subcommand("fit", "fit a coefficient path to a panel CSV");
  fit->add_option("--panel", panel_path, "input panel CSV")->required();
  fit->add_option("--config", config_path, "key=value config file");
  fit->add_option("--out", out_path, "output betas CSV");
  fit->add_option("--report", report_path, "output report text");
  add_override_flags(fit, ov);

  auto* gen = app.add_subcommand("gen", "generate a synthetic panel");
  gen->add_option("--config", config_path, "key=value config file");
  gen->add_option("--out", gen_out, "output panel CSV");
  gen->add_option("--truth", truth_path, "output truth CSV");
  add_override_flags(gen, ov);

  auto* val = app.add_subcommand("validate", "closed-form vs oracle validation run");
  val->add_option("family", family, "penalty family")->required();
  val->add_option("--n", n_val, "number of random instances");
  add_override_flags(val, ov);

  auto* prop = app.add_subcommand("propagate", "transition-operator residual table");
  prop->add_option("--f", f_name, "potential: zero, const or square");
  prop->add_option("--c", f_const, "constant value for --f const");
  prop->add_option("--epsilon", epsilon, "step size");
  prop->add_option("--steps", steps, "number of steps");
  prop->add_option("--xmin", x_min, "grid lower bound");
  prop->add_option("--xmax", x_max, "grid upper bound");
  prop->add_option("--nodes", nodes, "number of grid nodes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (fit->parsed()) return cmd_fit(panel_path, config_path, ov, out_path, report_path);
    if (gen->parsed()) return cmd_gen(config_path, ov, gen_out, truth_path);
    if (val->parsed()) return cmd_validate(family, n_val, ov.seed.value_or(1), ov);
    return cmd_propagate(f_name, f_const, epsilon, steps, x_min, x_max, nodes);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
