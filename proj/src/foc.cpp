#include "bpreg/foc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace bpreg {

double g_eval(const GFunction& gf, double s, double x, int order) {
  if (order < 0 || order > 2) throw InvalidSpec("g_eval: order must be 0, 1 or 2");
  if (gf.lambda_star == 0.0) return 0.0;
  const double e = s * x;
  if (e > 700.0) throw OverflowError("g_eval: exp(s*x) overflows");
  const double g = gf.lambda_star * std::exp(e);
  if (order == 0) return g;
  if (order == 1) return s * g;
  return s * s * g;
}

FocContext::FocContext(double s_, Vec y_, Mat x_, PenaltySpec spec_, BasisKind basis_)
    : s(s_), y(std::move(y_)), x(std::move(x_)), spec(std::move(spec_)), basis(basis_) {
  if (s < 0.0) throw InvalidSpec("FocContext: s must be >= 0");
  if (x.rows() != y.size()) throw InvalidSpec("FocContext: Y/X dimension mismatch");
  if (!y.allFinite() || !x.allFinite()) throw NonFiniteValue("FocContext: non-finite data");
  spec.validate(static_cast<int>(x.cols()));
  xh = apply_basis(x, basis);
}

namespace {

// Shared f evaluation; xb is the evaluation point of the bare-g terms.
double f_core(const FocContext& ctx, const Vec& beta, double xb) {
  const Vec r = ctx.y - ctx.xh * beta;
  double f = r.squaredNorm();
  if (ctx.spec.lambda_star > 0.0) {
    const GFunction gf = ctx.g();
    const double g0 = g_eval(gf, ctx.s, xb, 0);
    f += g0;            // g term
    f += xb * g0;       // g_s term: d/ds of lambda*exp(s*x) is x*g
    f += ctx.s * g0 * drift(ctx.spec, beta, ctx.s, ctx.x);
    if (ctx.s != 0.0) {
      double sig = 0.0;
      for (int k = 0; k < ctx.n_covariates(); ++k) {
        if (beta(k) == 0.0) continue;
        double col = 0.0;
        for (int i = 0; i < ctx.n_cases(); ++i)
          col += ctx.xh(i, k) * g_eval(gf, ctx.s, ctx.x(i, k), 0);
        sig += beta(k) * col;
      }
      f += ctx.s * ctx.s * sig;
    }
  }
  return f;
}

// s^2 * sum_i Xh_ik * g(s, X_ik), the beta-free diffusion contribution to
// the FOC at coordinate k.
double sigma_term(const FocContext& ctx, int k) {
  if (ctx.spec.lambda_star == 0.0 || ctx.s == 0.0) return 0.0;
  const GFunction gf = ctx.g();
  double acc = 0.0;
  for (int i = 0; i < ctx.n_cases(); ++i)
    acc += ctx.xh(i, k) * g_eval(gf, ctx.s, ctx.x(i, k), 0);
  return ctx.s * ctx.s * acc;
}

double bare_g(const FocContext& ctx, int k) {
  if (ctx.spec.lambda_star == 0.0) return 0.0;
  return g_eval(ctx.g(), ctx.s, ctx.xbar(k), 0);
}

struct CoordinateTerms {
  double a = 0.0;   // sum_i Xh_ik^2
  double bc = 0.0;  // partial-residual inner product sum_i Xh_ik*(Y_i - pred w/o k)
  double gk = 0.0;  // g(s, xbar_k)
  double s2 = 0.0;  // sigma term
};

CoordinateTerms coordinate_terms(const FocContext& ctx, const Vec& beta, int k) {
  CoordinateTerms t;
  t.a = ctx.xh.col(k).squaredNorm();
  const Vec pred_other = ctx.xh * beta - beta(k) * ctx.xh.col(k);
  t.bc = ctx.xh.col(k).dot(ctx.y - pred_other);
  t.gk = bare_g(ctx, k);
  t.s2 = sigma_term(ctx, k);
  return t;
}

// FOC residual as a function of a trial value for beta_k (others frozen).
double residual_at(const FocContext& ctx, Vec beta, int k, double t) {
  beta(k) = t;
  return foc_residual(ctx, beta, k);
}

double f_at(const FocContext& ctx, Vec beta, int k, double t) {
  beta(k) = t;
  return f_eval_at(ctx, beta, k);
}

double bisect_root(const FocContext& ctx, const Vec& beta, int k, double root_lo,
                   double root_hi) {
  double r_lo = residual_at(ctx, beta, k, root_lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (root_lo + root_hi);
    const double r_mid = residual_at(ctx, beta, k, mid);
    if (r_mid == 0.0) return mid;
    if ((r_mid > 0.0) == (r_lo > 0.0)) {
      root_lo = mid;
      r_lo = r_mid;
    } else {
      root_hi = mid;
    }
  }
  return 0.5 * (root_lo + root_hi);
}

// Exact same-branch root for the families whose drift gradient is nonlinear
// in beta_k (LpNorm, Bridge). Scans w * [1e-10, t_hi], bisects every sign
// change of the FOC and keeps the root with the lowest objective (the sqrt /
// p<1 penalties put a spurious stationary point near 0 on each branch);
// falls back to `seed` when no root exists on the branch.
double branch_root(const FocContext& ctx, const Vec& beta, int k, int branch,
                   double seed, double scale) {
  const double w = branch >= 0 ? 1.0 : -1.0;
  const double t_hi = std::max({std::abs(seed) * 4.0, scale, 1.0}) * 8.0;
  const int n_scan = 200;
  double prev_t = w * 1e-10;
  double prev_r;
  try {
    prev_r = residual_at(ctx, beta, k, prev_t);
  } catch (const Error&) {
    return seed;
  }
  const double lo_log = std::log(1e-10), hi_log = std::log(t_hi);
  bool found = false;
  double best_root = seed, best_f = 0.0;
  for (int i = 1; i <= n_scan; ++i) {
    const double t = w * std::exp(lo_log + (hi_log - lo_log) * i / n_scan);
    double r;
    try {
      r = residual_at(ctx, beta, k, t);
    } catch (const Error&) {
      prev_t = t;
      continue;
    }
    if ((prev_r > 0.0) != (r > 0.0)) {
      const double root = bisect_root(ctx, beta, k, prev_t, t);
      const double froot = f_at(ctx, beta, k, root);
      if (!found || froot < best_f) {
        found = true;
        best_root = root;
        best_f = froot;
      }
    }
    prev_t = t;
    prev_r = r;
  }
  return best_root;
}

}  // namespace

double f_eval(const FocContext& ctx, const Vec& beta) {
  return f_core(ctx, beta, ctx.xbar_all());
}

double f_eval_at(const FocContext& ctx, const Vec& beta, int k) {
  return f_core(ctx, beta, ctx.xbar(k));
}

double foc_residual(const FocContext& ctx, const Vec& beta, int k) {
  const Vec r = ctx.y - ctx.xh * beta;
  double res = 2.0 * ctx.xh.col(k).dot(r);
  if (ctx.spec.lambda_star > 0.0 && ctx.s != 0.0) {
    const double gk = bare_g(ctx, k);
    if (gk != 0.0) res -= ctx.s * gk * drift_grad(ctx.spec, beta, k, ctx.x);
    res -= sigma_term(ctx, k);
  }
  return res;
}

double closed_update(const FocContext& ctx, const Vec& beta, int k, int branch) {
  const double w = branch >= 0 ? 1.0 : -1.0;
  const double s = ctx.s;
  const CoordinateTerms t = coordinate_terms(ctx, beta, k);
  const int j = ctx.n_covariates();

  switch (ctx.spec.family) {
    case Family::Ridge: {
      const double denom = 2.0 * (t.a + s * t.gk);
      if (denom == 0.0) throw ZeroDenominator("Ridge update: sum X_ik^2 + s*g = 0");
      return (2.0 * t.bc - t.s2) / denom;
    }
    case Family::SplineCubic: {
      if (t.a == 0.0) throw ZeroDenominator("Spline update: sum h(X_ik)^2 = 0");
      const double mu_k = 2.0 + 6.0 * ctx.xbar(k);
      return (2.0 * t.bc - s * t.gk * mu_k - t.s2) / (2.0 * t.a);
    }
    case Family::Lasso: {
      if (t.a == 0.0) throw ZeroDenominator("Lasso update: sum X_ik^2 = 0");
      return (2.0 * t.bc - s * t.gk * w - t.s2) / (2.0 * t.a);
    }
    case Family::ElasticNet: {
      const double denom = 2.0 * (t.a + s * ctx.spec.alpha * t.gk);
      if (denom == 0.0) throw ZeroDenominator("ElasticNet update: zero denominator");
      return (2.0 * t.bc - s * t.gk * (1.0 - ctx.spec.alpha) * w - t.s2) / denom;
    }
    case Family::FusedLasso: {
      if (t.a == 0.0) throw ZeroDenominator("FusedLasso update: sum X_ik^2 = 0");
      // Inert penalty: every sign pattern collapses to the same update.
      if (s * t.gk == 0.0) return (2.0 * t.bc - t.s2) / (2.0 * t.a);
      const double al = ctx.spec.alpha;
      const bool has_left = k > 0, has_right = k + 1 < j;
      std::optional<double> best;
      double best_f = std::numeric_limits<double>::infinity();
      for (int d1 : {has_left ? -1 : 0, has_left ? 1 : 0}) {
        for (int d2 : {has_right ? -1 : 0, has_right ? 1 : 0}) {
          const double mu_k = al * w + (1.0 - al) * (d1 - d2);
          const double cand =
              (2.0 * t.bc - s * t.gk * mu_k - t.s2) / (2.0 * t.a);
          if (cand * w <= 0.0) continue;
          if (has_left && (cand - beta(k - 1)) * d1 <= 0.0) continue;
          if (has_right && (beta(k + 1) - cand) * d2 <= 0.0) continue;
          Vec b = beta;
          b(k) = cand;
          const double fc = f_eval_at(ctx, b, k);
          if (!best || fc < best_f) {
            best = cand;
            best_f = fc;
          }
          if (!has_right) break;
        }
        if (!has_left) break;
      }
      if (!best)
        throw TiedFusedPair("FusedLasso update: minimizer ties a neighbor on this branch");
      return *best;
    }
    case Family::LpNorm: {
      if (t.a == 0.0) throw ZeroDenominator("LpNorm update: sum X_ik^2 = 0");
      // Plug-in seed from the printed formula, then same-branch FOC root.
      double seed = (2.0 * t.bc - s * t.gk * w - t.s2) / (2.0 * t.a);
      if (ctx.spec.lambda_star > 0.0 && s != 0.0 && t.gk != 0.0) {
        double norm_p = 0.0, cross = 0.0;
        bool defined = true;
        for (int c = 0; c < j; ++c) {
          const double ab = std::abs(beta(c));
          if (ab == 0.0 && ctx.spec.p < 1.0) defined = false;
          norm_p += std::pow(ab, ctx.spec.p);
          if (c != k && ab > 0.0)
            cross += (beta(c) > 0.0 ? 1.0 : -1.0) * std::pow(ab, ctx.spec.p - 1.0);
        }
        if (defined && norm_p > 0.0) {
          const double norm_fac = std::pow(norm_p, 1.0 / ctx.spec.p - 1.0);
          seed = (2.0 * t.bc - s * t.gk * (w + norm_fac * cross) - t.s2) / (2.0 * t.a);
        }
        return branch_root(ctx, beta, k, branch, seed,
                           std::abs(t.bc) / std::max(t.a, 1e-300));
      }
      return seed;
    }
    case Family::Bridge: {
      if (t.a == 0.0) throw ZeroDenominator("Bridge update: sum X_ik^2 = 0");
      double seed = (2.0 * t.bc - s * t.gk * w - t.s2) / (2.0 * t.a);
      if (ctx.spec.lambda_star > 0.0 && s != 0.0 && t.gk != 0.0) {
        double cross = 0.0;
        for (int c = 0; c < j; ++c)
          if (c != k) cross += std::sqrt(std::abs(beta(c)));
        const double anchor = std::max(std::abs(beta(k)), 1e-8);
        seed = (2.0 * t.bc - s * t.gk * w * (1.0 + cross / std::sqrt(anchor)) - t.s2) /
               (2.0 * t.a);
        return branch_root(ctx, beta, k, branch, seed,
                           std::abs(t.bc) / std::max(t.a, 1e-300));
      }
      return seed;
    }
    case Family::GroupLasso: {
      const Vec bg = group_update(ctx, beta, k / ctx.spec.group_size);
      return bg(k % ctx.spec.group_size);
    }
  }
  throw InvalidSpec("closed_update: unknown family");
}

namespace {

// Builds the printed group linear system A * beta_g = rhs / 2.
void group_system(const FocContext& ctx, const Vec& beta, int group, Mat& a, Vec& rhs) {
  const int m = ctx.spec.group_size;
  const int j0 = group * m;
  const int n_groups = ctx.n_covariates() / m;
  const auto xg = ctx.xh.middleCols(j0, m);

  const Mat kg = ctx.spec.group_matrix(group);
  const double gg = ctx.spec.lambda_star > 0.0
                        ? g_eval(ctx.g(), ctx.s, ctx.x.middleCols(j0, m).mean(), 0)
                        : 0.0;
  a = xg.transpose() * xg + (kg + kg.transpose()) * gg;

  const Vec partial = ctx.y - (ctx.xh * beta - xg * beta.segment(j0, m));
  rhs = 2.0 * xg.transpose() * partial;
  if (ctx.spec.lambda_star > 0.0 && ctx.s != 0.0) {
    Vec cross = Vec::Zero(m);
    for (int g2 = 0; g2 < n_groups; ++g2) {
      if (g2 == group) continue;
      const Mat k2 = ctx.spec.group_matrix(g2);
      cross += (k2 + k2.transpose()) * beta.segment(g2 * m, m);
    }
    rhs -= ctx.s * gg * cross;
    for (int c = 0; c < m; ++c) rhs(c) -= sigma_term(ctx, j0 + c);
  }
}

}  // namespace

Vec group_update(const FocContext& ctx, const Vec& beta, int group) {
  Mat a;
  Vec rhs;
  group_system(ctx, beta, group, a, rhs);
  Eigen::FullPivLU<Mat> lu(a);
  if (!lu.isInvertible())
    throw SingularSystem("group_update: system matrix is singular");
  return 0.5 * lu.solve(rhs);
}

double group_system_residual(const FocContext& ctx, const Vec& beta, int group) {
  Mat a;
  Vec rhs;
  group_system(ctx, beta, group, a, rhs);
  const int m = ctx.spec.group_size;
  const Vec res = a * beta.segment(group * m, m) - 0.5 * rhs;
  return res.lpNorm<Eigen::Infinity>();
}

}  // namespace bpreg
