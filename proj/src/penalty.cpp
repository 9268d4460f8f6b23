#include "bpreg/penalty.hpp"

#include <cmath>

namespace bpreg {

namespace {

double sgn_strict(double v, const char* what) {
  if (v > 0.0) return 1.0;
  if (v < 0.0) return -1.0;
  throw NonDifferentiableAtZero(what);
}

}  // namespace

double basis_value(double x, BasisKind basis) {
  if (basis == BasisKind::Identity) return x;
  return x + x * x + x * x * x;
}

Mat apply_basis(const Mat& x, BasisKind basis) {
  if (!x.allFinite()) throw NonFiniteValue("apply_basis: non-finite entry");
  if (basis == BasisKind::Identity) return x;
  return x.unaryExpr([](double v) { return basis_value(v, BasisKind::Cubic); });
}

double drift(const PenaltySpec& spec, const Vec& beta, double s, const Mat& x_slice) {
  (void)s;  // the catalog drifts are autonomous in s
  const int j = static_cast<int>(beta.size());
  switch (spec.family) {
    case Family::Lasso:
      return beta.array().abs().sum();
    case Family::Ridge:
      return beta.squaredNorm();
    case Family::LpNorm: {
      double acc = 0.0;
      for (int k = 0; k < j; ++k) acc += std::pow(std::abs(beta(k)), spec.p);
      return std::pow(acc, 1.0 / spec.p);
    }
    case Family::ElasticNet:
      return (1.0 - spec.alpha) * beta.array().abs().sum() +
             spec.alpha * beta.squaredNorm();
    case Family::FusedLasso: {
      double acc = spec.alpha * beta.array().abs().sum();
      for (int k = 1; k < j; ++k)
        acc += (1.0 - spec.alpha) * std::abs(beta(k) - beta(k - 1));
      return acc;
    }
    case Family::Bridge: {
      double root_sum = 0.0;
      for (int k = 0; k < j; ++k) root_sum += std::sqrt(std::abs(beta(k)));
      return root_sum * root_sum;
    }
    case Family::GroupLasso: {
      const int m = spec.group_size;
      double acc = 0.0;
      for (int g = 0; g < j / m; ++g) {
        const Vec bg = beta.segment(g * m, m);
        acc += bg.dot(spec.group_matrix(g) * bg);
      }
      return acc;
    }
    case Family::SplineCubic: {
      // Example-8 drift 2*beta + 6*beta*X, i-aggregated at the column mean.
      double acc = 0.0;
      for (int k = 0; k < j; ++k)
        acc += beta(k) * (2.0 + 6.0 * x_slice.col(k).mean());
      return acc;
    }
  }
  throw InvalidSpec("drift: unknown family");
}

double drift_grad(const PenaltySpec& spec, const Vec& beta, int k, const Mat& x_slice) {
  const int j = static_cast<int>(beta.size());
  switch (spec.family) {
    case Family::Lasso:
      return sgn_strict(beta(k), "Lasso drift_grad at beta_k = 0");
    case Family::Ridge:
      return 2.0 * beta(k);
    case Family::LpNorm: {
      const double sk = sgn_strict(beta(k), "LpNorm drift_grad at beta_k = 0");
      double acc = 0.0;
      for (int c = 0; c < j; ++c) {
        if (beta(c) == 0.0 && spec.p < 1.0)
          throw NonDifferentiableAtZero("LpNorm drift_grad with a zero coordinate");
        acc += std::pow(std::abs(beta(c)), spec.p);
      }
      if (acc == 0.0) throw NonDifferentiableAtZero("LpNorm drift_grad at beta = 0");
      return std::pow(acc, 1.0 / spec.p - 1.0) *
             std::pow(std::abs(beta(k)), spec.p - 1.0) * sk;
    }
    case Family::ElasticNet:
      return (1.0 - spec.alpha) *
                 sgn_strict(beta(k), "ElasticNet drift_grad at beta_k = 0") +
             2.0 * spec.alpha * beta(k);
    case Family::FusedLasso: {
      double g = spec.alpha * sgn_strict(beta(k), "FusedLasso drift_grad at beta_k = 0");
      if (k > 0) {
        const double d = beta(k) - beta(k - 1);
        if (d == 0.0) throw TiedFusedPair("FusedLasso drift_grad at beta_k = beta_{k-1}");
        g += (1.0 - spec.alpha) * (d > 0.0 ? 1.0 : -1.0);
      }
      if (k + 1 < j) {
        const double d = beta(k + 1) - beta(k);
        if (d == 0.0) throw TiedFusedPair("FusedLasso drift_grad at beta_k = beta_{k+1}");
        g -= (1.0 - spec.alpha) * (d > 0.0 ? 1.0 : -1.0);
      }
      return g;
    }
    case Family::Bridge: {
      const double sk = sgn_strict(beta(k), "Bridge drift_grad at beta_k = 0");
      double root_sum = 0.0;
      for (int c = 0; c < j; ++c) root_sum += std::sqrt(std::abs(beta(c)));
      return sk * root_sum / std::sqrt(std::abs(beta(k)));
    }
    case Family::GroupLasso: {
      const int m = spec.group_size;
      const int g = k / m;
      const Mat kg = spec.group_matrix(g);
      const Vec bg = beta.segment(g * m, m);
      const Vec grad = (kg + kg.transpose()) * bg;
      return grad(k - g * m);
    }
    case Family::SplineCubic:
      return 2.0 + 6.0 * x_slice.col(k).mean();
  }
  throw InvalidSpec("drift_grad: unknown family");
}

double diffusion(const Mat& x_slice, const Vec& beta, BasisKind basis) {
  double acc = 0.0;
  for (int k = 0; k < beta.size(); ++k) {
    double col = 0.0;
    for (int i = 0; i < x_slice.rows(); ++i) col += basis_value(x_slice(i, k), basis);
    acc += beta(k) * col;
  }
  return 2.0 * acc;
}

double diffusion_grad(const Mat& x_slice, int k, BasisKind basis) {
  double col = 0.0;
  for (int i = 0; i < x_slice.rows(); ++i) col += basis_value(x_slice(i, k), basis);
  return 2.0 * col;
}

}  // namespace bpreg
