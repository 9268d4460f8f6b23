#pragma once

#include "bpreg/foc.hpp"
#include "bpreg/types.hpp"

namespace bpreg {

enum class Init { Zero, Ols, Warm };

struct SolveOptions {
  int max_sweeps = 500;
  double tol = 1e-8;  // scaled internally by 1 + |Y|^2
  Init init = Init::Ols;
  /// When nonempty, fixes the sign branch per coordinate instead of trying
  /// both.
  std::vector<int> fixed_signs;

  void validate() const {
    if (max_sweeps < 1) throw InvalidSpec("SolveOptions: max_sweeps must be >= 1");
    if (!(tol > 0.0)) throw InvalidSpec("SolveOptions: tol must be positive");
  }
};

struct TimepointReport {
  bool converged = false;
  int sweeps = 0;
  double max_residual = 0.0;
  std::vector<int> branch_signs;
  double objective = 0.0;
  std::string note;
};

struct FitReport {
  std::vector<TimepointReport> points;
  double objective_integral = 0.0;
  bool all_converged = false;
};

/// Cyclic coordinate descent on the closed-form updates at one time point.
/// Two-branch families evaluate both branches and keep a sign-consistent
/// one (lower f on ties, +1 on exact ties).
std::pair<Vec, TimepointReport> fit_timepoint(const FocContext& ctx,
                                              const SolveOptions& opts,
                                              const Vec* warm_start = nullptr);

/// Independent per-grid-point fits over the whole panel. Warm init chains
/// each solution into the next grid point.
std::pair<CoefPath, FitReport> fit_path(const Panel& panel, const PenaltySpec& spec,
                                        BasisKind basis, const SolveOptions& opts);

/// Least-squares coefficients for one design (stable QR factorization).
Vec least_squares(const Mat& xh, const Vec& y);

}  // namespace bpreg
