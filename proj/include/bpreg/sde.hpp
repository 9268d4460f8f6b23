#pragma once

#include <cstdint>
#include <functional>

#include "bpreg/types.hpp"

namespace bpreg {

/// Counter-based deterministic generator: every draw is a pure function of
/// (seed, stream, path, step), so results are independent of scheduling and
/// never reuse a key.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t key(std::uint64_t path, std::uint64_t step, std::uint64_t lane) const;
  /// Uniform in (0, 1).
  double uniform(std::uint64_t path, std::uint64_t step, std::uint64_t lane) const;
  /// Standard normal (Box-Muller on lanes 2*pair, 2*pair+1).
  double normal(std::uint64_t path, std::uint64_t step, std::uint64_t pair = 0) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

struct ErrorPaths {
  TimeGrid grid;
  Mat paths;  // n_paths x grid_size
  std::uint64_t seed = 0;
};

/// Explicit Euler-Maruyama with time-varying scalar coefficients:
/// U_{t+1} = U_t + mu(t)*dt + sigma(t)*sqrt(dt)*Z. Coefficients are frozen
/// at the left endpoint of each step.
ErrorPaths euler_maruyama(const TimeGrid& grid,
                          const std::function<double(int)>& mu_at,
                          const std::function<double(int)>& sigma_at, int n_paths,
                          std::uint64_t seed, double u0);

/// Simulates the error SDE driven by the fitted/true coefficient path and
/// the panel covariates under the given penalty family.
ErrorPaths simulate_errors(const CoefPath& beta_path, const std::vector<Mat>& x,
                           const PenaltySpec& spec, BasisKind basis, int n_paths,
                           std::uint64_t seed, double u0);

/// Builds a synthetic panel Y_i(s) = sum_k beta_k(s) h(X_ik(s)) + U_i(s)
/// with one independent error path per case. noise_scale multiplies the
/// whole error term (0 gives a noiseless panel).
Panel generate_panel(const CoefPath& beta_true, const std::vector<Mat>& x,
                     const PenaltySpec& spec, BasisKind basis, std::uint64_t seed,
                     double noise_scale, double u0 = 0.0);

/// Trapezoid-rule integral over the grid of sum_i residual^2.
double objective_eval(const Panel& panel, const CoefPath& beta_path, BasisKind basis);

/// Random N x J covariate slices, one per grid point, iid standard normal
/// under the counter generator (stream-separated from the error draws).
std::vector<Mat> random_covariates(const TimeGrid& grid, int n_cases,
                                   int n_covariates, std::uint64_t seed);

}  // namespace bpreg
