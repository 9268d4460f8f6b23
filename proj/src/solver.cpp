#include "bpreg/solver.hpp"

#include <cmath>
#include <limits>

namespace bpreg {

Vec least_squares(const Mat& xh, const Vec& y) {
  return xh.colPivHouseholderQr().solve(y);
}

namespace {

bool is_two_branch(Family f) {
  switch (f) {
    case Family::Lasso:
    case Family::LpNorm:
    case Family::ElasticNet:
    case Family::FusedLasso:
    case Family::Bridge:
      return true;
    default:
      return false;
  }
}

void append_note(std::string& notes, const std::string& msg) {
  if (notes.find(msg) != std::string::npos) return;  // dedupe per point
  if (!notes.empty()) notes += "; ";
  notes += msg;
}

double point_residual(const FocContext& ctx, const Vec& beta, std::string& notes) {
  double worst = 0.0;
  if (ctx.spec.family == Family::GroupLasso) {
    const int n_groups = ctx.n_covariates() / ctx.spec.group_size;
    for (int g = 0; g < n_groups; ++g)
      worst = std::max(worst, group_system_residual(ctx, beta, g));
    return worst;
  }
  for (int k = 0; k < ctx.n_covariates(); ++k) {
    try {
      worst = std::max(worst, std::abs(foc_residual(ctx, beta, k)));
    } catch (const Error& e) {
      append_note(notes, std::string("residual undefined: ") + e.what());
      worst = std::numeric_limits<double>::infinity();
    }
  }
  return worst;
}

}  // namespace

std::pair<Vec, TimepointReport> fit_timepoint(const FocContext& ctx,
                                              const SolveOptions& opts,
                                              const Vec* warm_start) {
  opts.validate();
  const int j = ctx.n_covariates();
  const double tol_eff = opts.tol * (1.0 + ctx.y.squaredNorm());

  Vec beta = Vec::Zero(j);
  if (opts.init == Init::Warm && warm_start != nullptr) {
    beta = *warm_start;
  } else if (opts.init != Init::Zero) {
    beta = least_squares(ctx.xh, ctx.y);
  }

  TimepointReport rep;
  const bool two_branch = is_two_branch(ctx.spec.family);

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    rep.sweeps = sweep;
    if (ctx.spec.family == Family::GroupLasso) {
      for (int g = 0; g < j / ctx.spec.group_size; ++g) {
        try {
          beta.segment(g * ctx.spec.group_size, ctx.spec.group_size) =
              group_update(ctx, beta, g);
        } catch (const Error& e) {
          append_note(rep.note, e.what());
        }
      }
    } else if (!two_branch) {
      for (int k = 0; k < j; ++k) {
        try {
          beta(k) = closed_update(ctx, beta, k, +1);
        } catch (const Error& e) {
          append_note(rep.note, e.what());
        }
      }
    } else {
      for (int k = 0; k < j; ++k) {
        bool has_best = false;
        double best = 0.0, best_f = 0.0;
        std::vector<int> branches;
        if (!opts.fixed_signs.empty())
          branches = {opts.fixed_signs[static_cast<size_t>(k)]};
        else
          branches = {+1, -1};
        for (int w : branches) {
          double cand;
          try {
            cand = closed_update(ctx, beta, k, w);
          } catch (const ZeroDenominator& e) {
            append_note(rep.note, e.what());
            continue;
          } catch (const Error&) {
            continue;
          }
          if (cand * w <= 0.0) continue;  // branch-inconsistent
          Vec b = beta;
          b(k) = cand;
          const double fc = f_eval_at(ctx, b, k);
          if (!has_best || fc < best_f) {  // +1 tried first; ties keep it
            has_best = true;
            best = cand;
            best_f = fc;
          }
        }
        if (has_best)
          beta(k) = best;
        else
          append_note(rep.note,
                      "no consistent branch at coordinate " + std::to_string(k + 1));
      }
    }

    rep.max_residual = point_residual(ctx, beta, rep.note);
    if (rep.max_residual <= tol_eff) {
      rep.converged = true;
      break;
    }
  }

  rep.branch_signs.resize(static_cast<size_t>(j));
  for (int k = 0; k < j; ++k)
    rep.branch_signs[static_cast<size_t>(k)] = beta(k) < 0.0 ? -1 : 1;
  rep.objective = f_eval(ctx, beta);
  return {beta, rep};
}

std::pair<CoefPath, FitReport> fit_path(const Panel& panel, const PenaltySpec& spec,
                                        BasisKind basis, const SolveOptions& opts) {
  opts.validate();
  spec.validate(panel.n_covariates());

  std::vector<Vec> betas;
  std::vector<PointDiagnostics> diags;
  FitReport report;
  report.all_converged = true;
  Vec warm;

  for (int t = 0; t < panel.n_times(); ++t) {
    TimepointReport rep;
    Vec beta = Vec::Zero(panel.n_covariates());
    try {
      FocContext ctx(panel.grid()[t], panel.y(t), panel.x(t), spec, basis);
      const Vec* ws = (opts.init == Init::Warm && t > 0) ? &warm : nullptr;
      std::tie(beta, rep) = fit_timepoint(ctx, opts, ws);
    } catch (const Error& e) {
      rep.converged = false;
      rep.note = e.what();
      rep.branch_signs.assign(static_cast<size_t>(panel.n_covariates()), 1);
    }
    report.all_converged = report.all_converged && rep.converged;
    warm = beta;

    PointDiagnostics d;
    d.foc_residual_norm = rep.max_residual;
    d.iterations = rep.sweeps;
    d.branch_signs = rep.branch_signs;
    d.converged = rep.converged;
    d.objective = rep.objective;
    d.note = rep.note;
    betas.push_back(std::move(beta));
    diags.push_back(std::move(d));
    report.points.push_back(std::move(rep));
  }

  // Trapezoid integral of the residual sum of squares along the grid.
  double integral = 0.0;
  auto rss = [&](int t) {
    const Vec r = panel.y(t) - apply_basis(panel.x(t), basis) * betas[static_cast<size_t>(t)];
    return r.squaredNorm();
  };
  double prev = rss(0);
  for (int t = 1; t < panel.n_times(); ++t) {
    const double cur = rss(t);
    integral += 0.5 * (prev + cur) * (panel.grid()[t] - panel.grid()[t - 1]);
    prev = cur;
  }
  report.objective_integral = integral;

  return {CoefPath(panel.grid(), std::move(betas), std::move(diags)), report};
}

}  // namespace bpreg
