#include "bpreg/sde.hpp"

#include <cmath>
#include <numbers>

#include "bpreg/penalty.hpp"

namespace bpreg {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::key(std::uint64_t path, std::uint64_t step,
                              std::uint64_t lane) const {
  std::uint64_t h = mix64(seed_ ^ 0x6a09e667f3bcc908ULL);
  h = mix64(h ^ stream_);
  h = mix64(h ^ path);
  h = mix64(h ^ step);
  h = mix64(h ^ lane);
  return h;
}

double CounterRng::uniform(std::uint64_t path, std::uint64_t step,
                           std::uint64_t lane) const {
  const std::uint64_t bits = key(path, step, lane) >> 11;  // 53 bits
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t path, std::uint64_t step,
                          std::uint64_t pair) const {
  const double u1 = uniform(path, step, 2 * pair);
  const double u2 = uniform(path, step, 2 * pair + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ErrorPaths euler_maruyama(const TimeGrid& grid,
                          const std::function<double(int)>& mu_at,
                          const std::function<double(int)>& sigma_at, int n_paths,
                          std::uint64_t seed, double u0) {
  if (n_paths < 1) throw InvalidSpec("euler_maruyama: n_paths must be >= 1");
  const int n_steps = grid.size() - 1;
  std::vector<double> mu(static_cast<size_t>(n_steps)), sg(static_cast<size_t>(n_steps));
  for (int t = 0; t < n_steps; ++t) {
    mu[static_cast<size_t>(t)] = mu_at(t);
    sg[static_cast<size_t>(t)] = sigma_at(t);
  }

  CounterRng rng(seed);
  Mat paths(n_paths, grid.size());
  for (int p = 0; p < n_paths; ++p) {
    double u = u0;
    paths(p, 0) = u;
    for (int t = 0; t < n_steps; ++t) {
      const double dt = grid[t + 1] - grid[t];
      double inc = mu[static_cast<size_t>(t)] * dt;
      if (sg[static_cast<size_t>(t)] != 0.0)
        inc += sg[static_cast<size_t>(t)] * std::sqrt(dt) *
               rng.normal(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(t));
      u += inc;
      if (!std::isfinite(u)) throw NonFiniteValue("euler_maruyama: path diverged");
      paths(p, t + 1) = u;
    }
  }
  return ErrorPaths{grid, std::move(paths), seed};
}

ErrorPaths simulate_errors(const CoefPath& beta_path, const std::vector<Mat>& x,
                           const PenaltySpec& spec, BasisKind basis, int n_paths,
                           std::uint64_t seed, double u0) {
  if (x.size() != static_cast<size_t>(beta_path.grid.size()))
    throw GridMismatch("simulate_errors: covariates / beta path grid mismatch");
  spec.validate(static_cast<int>(x.front().cols()));
  auto mu_at = [&](int t) {
    return drift(spec, beta_path.betas[static_cast<size_t>(t)], beta_path.grid[t],
                 x[static_cast<size_t>(t)]);
  };
  auto sigma_at = [&](int t) {
    return diffusion(x[static_cast<size_t>(t)], beta_path.betas[static_cast<size_t>(t)],
                     basis);
  };
  return euler_maruyama(beta_path.grid, mu_at, sigma_at, n_paths, seed, u0);
}

Panel generate_panel(const CoefPath& beta_true, const std::vector<Mat>& x,
                     const PenaltySpec& spec, BasisKind basis, std::uint64_t seed,
                     double noise_scale, double u0) {
  if (x.size() != static_cast<size_t>(beta_true.grid.size()))
    throw GridMismatch("generate_panel: covariates / beta path grid mismatch");
  const int n = static_cast<int>(x.front().rows());

  // One independent error path per case, all sharing the key stream.
  ErrorPaths err = simulate_errors(beta_true, x, spec, basis, n, seed, u0);

  std::vector<Vec> ys;
  ys.reserve(x.size());
  for (int t = 0; t < beta_true.grid.size(); ++t) {
    const Mat xh = apply_basis(x[static_cast<size_t>(t)], basis);
    Vec y = xh * beta_true.betas[static_cast<size_t>(t)];
    for (int i = 0; i < n; ++i) y(i) += noise_scale * err.paths(i, t);
    ys.push_back(std::move(y));
  }
  return Panel(beta_true.grid, std::move(ys), x);
}

double objective_eval(const Panel& panel, const CoefPath& beta_path, BasisKind basis) {
  if (!(panel.grid() == beta_path.grid))
    throw GridMismatch("objective_eval: panel / beta path grid mismatch");
  auto rss = [&](int t) {
    const Vec r = panel.y(t) -
                  apply_basis(panel.x(t), basis) * beta_path.betas[static_cast<size_t>(t)];
    return r.squaredNorm();
  };
  double integral = 0.0;
  double prev = rss(0);
  for (int t = 1; t < panel.n_times(); ++t) {
    const double cur = rss(t);
    integral += 0.5 * (prev + cur) * (panel.grid()[t] - panel.grid()[t - 1]);
    prev = cur;
  }
  return integral;
}

std::vector<Mat> random_covariates(const TimeGrid& grid, int n_cases, int n_covariates,
                                   std::uint64_t seed) {
  if (n_cases < 1 || n_covariates < 1)
    throw InvalidSpec("random_covariates: need N >= 1 and J >= 1");
  CounterRng rng(seed, /*stream=*/0x5851f42d4c957f2dULL);
  std::vector<Mat> out;
  out.reserve(static_cast<size_t>(grid.size()));
  for (int t = 0; t < grid.size(); ++t) {
    Mat x(n_cases, n_covariates);
    for (int i = 0; i < n_cases; ++i)
      for (int c = 0; c < n_covariates; ++c)
        x(i, c) = rng.normal(static_cast<std::uint64_t>(t),
                             static_cast<std::uint64_t>(i * n_covariates + c));
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace bpreg
