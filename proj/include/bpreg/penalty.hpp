#pragma once

#include "bpreg/types.hpp"

namespace bpreg {

/// Elementwise basis map. Identity leaves x untouched; Cubic is
/// h(x) = x + x^2 + x^3.
double basis_value(double x, BasisKind basis);
Mat apply_basis(const Mat& x, BasisKind basis);

/// Scalar drift of the error dynamics for the given family.
/// The covariate slice is only consulted by SplineCubic, whose drift
/// 2*beta + 6*beta*X is aggregated at the case-averaged covariate.
double drift(const PenaltySpec& spec, const Vec& beta, double s,
             const Mat& x_slice);

/// Exact partial derivative of drift with respect to beta_k on the smooth
/// branch containing beta. Throws NonDifferentiableAtZero / TiedFusedPair
/// off the smooth set.
double drift_grad(const PenaltySpec& spec, const Vec& beta, int k,
                  const Mat& x_slice);

/// Scalar diffusion 2 * sum_i sum_j beta_j * h(X_ij).
double diffusion(const Mat& x_slice, const Vec& beta, BasisKind basis);

/// Partial derivative of the diffusion with respect to beta_k:
/// 2 * sum_i h(X_ik).
double diffusion_grad(const Mat& x_slice, int k, BasisKind basis);

}  // namespace bpreg
