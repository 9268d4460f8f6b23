#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bpreg/foc.hpp"

namespace bpreg {

/// Brute-force scalar minimizer of the coordinate objective f (grid scan on
/// each smooth branch followed by golden-section refinement). Independent of
/// the closed-form update path.
double minimize_f_scalar(const FocContext& ctx, const Vec& beta_others, int k,
                         double lo, double hi, int n_grid = 400);

/// Root of the scalar FOC residual by bisection on one sign branch; returns
/// the root or NaN when the residual does not change sign on the branch.
double foc_root_bisect(const FocContext& ctx, const Vec& beta_others, int k,
                       int branch, double hi);

/// Normal-equation least squares with an explicit singularity check.
Vec ols_normal_equations(const Mat& x, const Vec& y, BasisKind basis);

struct FamilyValidationReport {
  std::string family;
  int n_instances = 0;
  int comparisons = 0;
  int branch_consistent = 0;
  int branch_inconsistent = 0;
  double max_closed_vs_oracle = 0.0;
  double max_closed_vs_bisect = 0.0;
  /// Group LASSO only: worst gap between the printed linear-system solution
  /// and the root of the module's own FOC (the printed denominator carries g
  /// without the s factor, so a systematic gap is expected away from s = 1).
  double printed_vs_foc_gap = 0.0;
  std::vector<std::string> notes;

  std::string to_text() const;
};

/// Compares closed_update against the brute-force oracle and the FOC
/// bisection root on random instances. Report-only: discrepancies are
/// counted, not failed.
FamilyValidationReport validate_family(const PenaltySpec& spec, BasisKind basis,
                                       int n_instances, std::uint64_t seed);

}  // namespace bpreg
