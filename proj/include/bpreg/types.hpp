#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpreg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct MissingCase : Error {
  using Error::Error;
};
struct RaggedJ : Error {
  using Error::Error;
};
struct NonFiniteValue : Error {
  using Error::Error;
};
struct InvalidSpec : Error {
  using Error::Error;
};
struct NonDifferentiableAtZero : Error {
  using Error::Error;
};
struct TiedFusedPair : Error {
  using Error::Error;
};
struct OverflowError : Error {
  using Error::Error;
};
struct ZeroDenominator : Error {
  using Error::Error;
};
struct SingularSystem : Error {
  using Error::Error;
};
struct SingularDesign : Error {
  using Error::Error;
};
struct GridMismatch : Error {
  using Error::Error;
};
struct NegativePsi : Error {
  using Error::Error;
};
struct UnboundedF : Error {
  using Error::Error;
};
struct NoInteriorMinimum : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Time grid

/// Strictly increasing time points in [0, T]. Non-uniform spacing allowed;
/// time integrals over the grid use the trapezoid rule.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> points);

  static TimeGrid uniform(double t_max, int n_points);

  const std::vector<double>& points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }
  double operator[](int i) const { return points_[static_cast<size_t>(i)]; }
  double t_min() const { return points_.front(); }
  double t_max() const { return points_.back(); }

  bool operator==(const TimeGrid& other) const { return points_ == other.points_; }

 private:
  std::vector<double> points_;
};

// ---------------------------------------------------------------------------
// Panel data

/// Balanced panel: at every grid point, responses for cases 1..N and an
/// N x J covariate matrix.
class Panel {
 public:
  Panel(TimeGrid grid, std::vector<Vec> y, std::vector<Mat> x);

  const TimeGrid& grid() const { return grid_; }
  int n_cases() const { return n_; }
  int n_covariates() const { return j_; }
  int n_times() const { return grid_.size(); }

  const Vec& y(int t) const { return y_[static_cast<size_t>(t)]; }
  const Mat& x(int t) const { return x_[static_cast<size_t>(t)]; }

  bool operator==(const Panel& other) const;

 private:
  TimeGrid grid_;
  std::vector<Vec> y_;
  std::vector<Mat> x_;
  int n_ = 0;
  int j_ = 0;
};

/// One input record: (time, case index 1..N, response, covariates).
struct PanelRow {
  double t = 0.0;
  int case_index = 0;
  double y = 0.0;
  std::vector<double> x;
};

/// Groups raw rows by time, checks the balanced-panel invariants and builds
/// a Panel. Rows may arrive in any order.
Panel validate_panel(const std::vector<PanelRow>& rows);

std::vector<PanelRow> panel_to_rows(const Panel& panel);

// ---------------------------------------------------------------------------
// Penalty specification

enum class Family {
  Lasso,
  Ridge,
  LpNorm,
  ElasticNet,
  FusedLasso,
  Bridge,
  GroupLasso,
  SplineCubic,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Penalty family plus hyperparameters. lambda_star scales the penalization
/// function g(s,x) = lambda_star * exp(s*x).
struct PenaltySpec {
  Family family = Family::Ridge;
  double lambda_star = 0.0;
  double alpha = 0.5;   // ElasticNet: [0,1]; FusedLasso: (0,1)
  double p = 1.0;       // LpNorm exponent, p != 0
  int group_size = 1;   // GroupLasso block size m; J must be a multiple
  std::vector<Mat> group_k;  // per-group SPD matrices; empty -> identity

  void validate(int n_covariates) const;

  int n_groups(int n_covariates) const { return n_covariates / group_size; }
  /// K for group g (identity when none was supplied).
  Mat group_matrix(int g) const;

  static PenaltySpec lasso(double lambda);
  static PenaltySpec ridge(double lambda);
  static PenaltySpec lp_norm(double lambda, double p);
  static PenaltySpec elastic_net(double lambda, double alpha);
  static PenaltySpec fused_lasso(double lambda, double alpha);
  static PenaltySpec bridge(double lambda);
  static PenaltySpec group_lasso(double lambda, int group_size,
                                 std::vector<Mat> ks = {});
  static PenaltySpec spline_cubic(double lambda);
};

enum class BasisKind { Identity, Cubic };

BasisKind basis_from_name(const std::string& name);
std::string basis_name(BasisKind b);

// ---------------------------------------------------------------------------
// Fitted coefficient path

struct PointDiagnostics {
  double foc_residual_norm = 0.0;
  int iterations = 0;
  std::vector<int> branch_signs;  // entries in {-1, +1}
  bool converged = false;
  double objective = 0.0;  // f value at the fitted point
  std::string note;
};

struct CoefPath {
  TimeGrid grid;
  std::vector<Vec> betas;
  std::vector<PointDiagnostics> diagnostics;

  CoefPath(TimeGrid g, std::vector<Vec> b, std::vector<PointDiagnostics> d);
  /// Path without diagnostics (e.g. a ground-truth path for simulation).
  static CoefPath plain(TimeGrid g, std::vector<Vec> b);
};

}  // namespace bpreg
