#pragma once

#include "bpreg/penalty.hpp"
#include "bpreg/types.hpp"

namespace bpreg {

/// Exponential penalization function g(s,x) = lambda_star * exp(s*x) with
/// x-partials s*g and s^2*g.
struct GFunction {
  double lambda_star = 0.0;
};

/// order 0 -> g, 1 -> dg/dx, 2 -> d^2g/dx^2. Throws OverflowError when the
/// exponent would overflow a double (and lambda_star > 0).
double g_eval(const GFunction& gf, double s, double x, int order);

/// Everything needed to evaluate f and its beta-partials at one time point.
/// Keeps the raw covariates (g is evaluated on them) alongside the
/// basis-applied design used by the residual terms.
struct FocContext {
  double s = 0.0;
  Vec y;
  Mat x;    // raw N x J covariates
  Mat xh;   // basis-applied covariates
  PenaltySpec spec;
  BasisKind basis = BasisKind::Identity;

  FocContext(double s_, Vec y_, Mat x_, PenaltySpec spec_, BasisKind basis_);

  int n_cases() const { return static_cast<int>(y.size()); }
  int n_covariates() const { return static_cast<int>(x.cols()); }
  GFunction g() const { return GFunction{spec.lambda_star}; }
  /// Case-averaged raw covariate for column k (the paper's bare-g argument).
  double xbar(int k) const { return x.col(k).mean(); }
  double xbar_all() const { return x.mean(); }
};

/// The f-function: residual sum of squares plus the g, g_s, drift and
/// diffusion penalty terms, with the bare-g terms evaluated at the grand
/// covariate mean.
double f_eval(const FocContext& ctx, const Vec& beta);

/// Per-coordinate antiderivative of the first-order condition: identical to
/// f_eval except that the bare-g terms are evaluated at the column mean of
/// coordinate k, so that -d/d(beta_k) of this function is foc_residual(k).
double f_eval_at(const FocContext& ctx, const Vec& beta, int k);

/// First-order-condition residual at coordinate k:
///   2*sum_i r_i*Xh_ik - s*g(s,xbar_k)*dmu/dbeta_k - s^2*sum_i Xh_ik*g(s,X_ik).
/// Zero at a fitted coordinate.
double foc_residual(const FocContext& ctx, const Vec& beta, int k);

/// Closed-form coordinate update with all other coordinates frozen.
/// branch in {+1,-1} selects the beta_k > 0 / beta_k < 0 formula for the
/// absolute-value families; single-formula families ignore it.
double closed_update(const FocContext& ctx, const Vec& beta, int k, int branch);

/// Group-LASSO block update (paper's printed linear system, solved rather
/// than inverted). Returns the m-vector for the given group.
Vec group_update(const FocContext& ctx, const Vec& beta, int group);

/// Residual of the printed group linear system A*beta_g - rhs/2 for the
/// given group, evaluated at beta. Used as the Group-LASSO convergence
/// measure (its printed formula does not zero the s-weighted FOC).
double group_system_residual(const FocContext& ctx, const Vec& beta, int group);

}  // namespace bpreg
