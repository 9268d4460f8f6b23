#include "bpreg/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace bpreg {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidSpec("TimeGrid needs at least 2 points");
  if (!std::isfinite(points_.front()) || points_.front() < 0.0)
    throw InvalidSpec("TimeGrid must start at a finite time >= 0");
  for (size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw NonFiniteValue("TimeGrid point is not finite");
    if (i > 0 && points_[i] <= points_[i - 1])
      throw InvalidSpec("TimeGrid points must be strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(double t_max, int n_points) {
  if (n_points < 2) throw InvalidSpec("uniform grid needs at least 2 points");
  if (!(t_max > 0.0)) throw InvalidSpec("uniform grid needs t_max > 0");
  std::vector<double> pts(static_cast<size_t>(n_points));
  for (int i = 0; i < n_points; ++i)
    pts[static_cast<size_t>(i)] = t_max * static_cast<double>(i) / (n_points - 1);
  return TimeGrid(std::move(pts));
}

Panel::Panel(TimeGrid grid, std::vector<Vec> y, std::vector<Mat> x)
    : grid_(std::move(grid)), y_(std::move(y)), x_(std::move(x)) {
  if (y_.size() != static_cast<size_t>(grid_.size()) || x_.size() != y_.size())
    throw InvalidSpec("Panel: one Y vector and one X matrix per grid point");
  n_ = static_cast<int>(y_.front().size());
  j_ = static_cast<int>(x_.front().cols());
  if (n_ < 1 || j_ < 1) throw InvalidSpec("Panel needs N >= 1 and J >= 1");
  for (size_t t = 0; t < y_.size(); ++t) {
    if (y_[t].size() != n_) throw MissingCase("Panel: inconsistent case count across times");
    if (x_[t].rows() != n_ || x_[t].cols() != j_)
      throw RaggedJ("Panel: inconsistent covariate dimensions across times");
    if (!y_[t].allFinite() || !x_[t].allFinite())
      throw NonFiniteValue("Panel contains a non-finite value");
  }
}

bool Panel::operator==(const Panel& other) const {
  if (!(grid_ == other.grid_) || n_ != other.n_ || j_ != other.j_) return false;
  for (size_t t = 0; t < y_.size(); ++t) {
    if (y_[t] != other.y_[t] || x_[t] != other.x_[t]) return false;
  }
  return true;
}

Panel validate_panel(const std::vector<PanelRow>& rows) {
  if (rows.empty()) throw InvalidSpec("validate_panel: no rows");
  const size_t j = rows.front().x.size();
  if (j == 0) throw RaggedJ("validate_panel: rows need at least one covariate");

  std::map<double, std::map<int, const PanelRow*>> by_time;
  int n_max = 0;
  for (const auto& row : rows) {
    if (row.x.size() != j) throw RaggedJ("validate_panel: inconsistent covariate count");
    if (!std::isfinite(row.t) || !std::isfinite(row.y))
      throw NonFiniteValue("validate_panel: non-finite t or y");
    for (double v : row.x)
      if (!std::isfinite(v)) throw NonFiniteValue("validate_panel: non-finite covariate");
    if (row.case_index < 1) throw MissingCase("validate_panel: case indices start at 1");
    auto& slot = by_time[row.t][row.case_index];
    if (slot != nullptr) throw MissingCase("validate_panel: duplicate (t, i) row");
    slot = &row;
    n_max = std::max(n_max, row.case_index);
  }

  std::vector<double> times;
  times.reserve(by_time.size());
  std::vector<Vec> ys;
  std::vector<Mat> xs;
  for (const auto& [t, cases] : by_time) {
    if (static_cast<int>(cases.size()) != n_max)
      throw MissingCase("validate_panel: case missing at t=" + std::to_string(t));
    Vec y(n_max);
    Mat x(n_max, static_cast<int>(j));
    for (int i = 1; i <= n_max; ++i) {
      auto it = cases.find(i);
      if (it == cases.end())
        throw MissingCase("validate_panel: case " + std::to_string(i) +
                          " missing at t=" + std::to_string(t));
      y(i - 1) = it->second->y;
      for (size_t c = 0; c < j; ++c) x(i - 1, static_cast<int>(c)) = it->second->x[c];
    }
    times.push_back(t);
    ys.push_back(std::move(y));
    xs.push_back(std::move(x));
  }
  return Panel(TimeGrid(std::move(times)), std::move(ys), std::move(xs));
}

std::vector<PanelRow> panel_to_rows(const Panel& panel) {
  std::vector<PanelRow> rows;
  rows.reserve(static_cast<size_t>(panel.n_times() * panel.n_cases()));
  for (int t = 0; t < panel.n_times(); ++t) {
    for (int i = 0; i < panel.n_cases(); ++i) {
      PanelRow row;
      row.t = panel.grid()[t];
      row.case_index = i + 1;
      row.y = panel.y(t)(i);
      row.x.resize(static_cast<size_t>(panel.n_covariates()));
      for (int c = 0; c < panel.n_covariates(); ++c)
        row.x[static_cast<size_t>(c)] = panel.x(t)(i, c);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Lasso: return "lasso";
    case Family::Ridge: return "ridge";
    case Family::LpNorm: return "lp";
    case Family::ElasticNet: return "elasticnet";
    case Family::FusedLasso: return "fusedlasso";
    case Family::Bridge: return "bridge";
    case Family::GroupLasso: return "grouplasso";
    case Family::SplineCubic: return "spline";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  if (name == "lasso") return Family::Lasso;
  if (name == "ridge") return Family::Ridge;
  if (name == "lp" || name == "lpnorm") return Family::LpNorm;
  if (name == "elasticnet") return Family::ElasticNet;
  if (name == "fusedlasso") return Family::FusedLasso;
  if (name == "bridge") return Family::Bridge;
  if (name == "grouplasso") return Family::GroupLasso;
  if (name == "spline" || name == "splinecubic") return Family::SplineCubic;
  throw ConfigError("unknown penalty family: " + name);
}

void PenaltySpec::validate(int n_covariates) const {
  if (!(lambda_star >= 0.0) || !std::isfinite(lambda_star))
    throw InvalidSpec("lambda_star must be a finite nonnegative real");
  switch (family) {
    case Family::LpNorm:
      if (p == 0.0 || !std::isfinite(p)) throw InvalidSpec("LpNorm requires p != 0");
      break;
    case Family::ElasticNet:
      if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InvalidSpec("ElasticNet requires alpha in [0,1]");
      break;
    case Family::FusedLasso:
      if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidSpec("FusedLasso requires alpha in (0,1)");
      break;
    case Family::GroupLasso: {
      if (group_size < 1) throw InvalidSpec("GroupLasso group_size must be >= 1");
      if (n_covariates % group_size != 0)
        throw InvalidSpec("GroupLasso: J must be a multiple of group_size");
      const int g = n_covariates / group_size;
      if (!group_k.empty() && static_cast<int>(group_k.size()) != g)
        throw InvalidSpec("GroupLasso: need one K matrix per group");
      for (const auto& k : group_k) {
        if (k.rows() != group_size || k.cols() != group_size)
          throw InvalidSpec("GroupLasso: K matrices must be group_size x group_size");
        Mat sym = 0.5 * (k + k.transpose());
        Eigen::SelfAdjointEigenSolver<Mat> es(sym);
        if (es.eigenvalues().minCoeff() <= 0.0)
          throw InvalidSpec("GroupLasso: K matrices must be positive definite");
      }
      break;
    }
    default:
      break;
  }
}

Mat PenaltySpec::group_matrix(int g) const {
  if (group_k.empty()) return Mat::Identity(group_size, group_size);
  return group_k[static_cast<size_t>(g)];
}

PenaltySpec PenaltySpec::lasso(double lambda) { return {Family::Lasso, lambda}; }
PenaltySpec PenaltySpec::ridge(double lambda) { return {Family::Ridge, lambda}; }
PenaltySpec PenaltySpec::lp_norm(double lambda, double p) {
  PenaltySpec s{Family::LpNorm, lambda};
  s.p = p;
  return s;
}
PenaltySpec PenaltySpec::elastic_net(double lambda, double alpha) {
  PenaltySpec s{Family::ElasticNet, lambda};
  s.alpha = alpha;
  return s;
}
PenaltySpec PenaltySpec::fused_lasso(double lambda, double alpha) {
  PenaltySpec s{Family::FusedLasso, lambda};
  s.alpha = alpha;
  return s;
}
PenaltySpec PenaltySpec::bridge(double lambda) { return {Family::Bridge, lambda}; }
PenaltySpec PenaltySpec::group_lasso(double lambda, int group_size, std::vector<Mat> ks) {
  PenaltySpec s{Family::GroupLasso, lambda};
  s.group_size = group_size;
  s.group_k = std::move(ks);
  return s;
}
PenaltySpec PenaltySpec::spline_cubic(double lambda) {
  PenaltySpec s{Family::SplineCubic, lambda};
  return s;
}

BasisKind basis_from_name(const std::string& name) {
  if (name == "identity") return BasisKind::Identity;
  if (name == "cubic") return BasisKind::Cubic;
  throw ConfigError("unknown basis: " + name);
}

std::string basis_name(BasisKind b) {
  return b == BasisKind::Identity ? "identity" : "cubic";
}

CoefPath::CoefPath(TimeGrid g, std::vector<Vec> b, std::vector<PointDiagnostics> d)
    : grid(std::move(g)), betas(std::move(b)), diagnostics(std::move(d)) {
  if (betas.size() != static_cast<size_t>(grid.size()))
    throw InvalidSpec("CoefPath: one beta vector per grid point");
  if (!diagnostics.empty() && diagnostics.size() != betas.size())
    throw InvalidSpec("CoefPath: diagnostics size mismatch");
}

CoefPath CoefPath::plain(TimeGrid g, std::vector<Vec> b) {
  return CoefPath(std::move(g), std::move(b), {});
}

}  // namespace bpreg
