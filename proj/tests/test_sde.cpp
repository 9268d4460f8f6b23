#include <cmath>
#include <set>

#include "bpreg/sde.hpp"
#include "doctest.h"

using namespace bpreg;

TEST_CASE("zero drift and diffusion keep U at U0") {
  TimeGrid grid = TimeGrid::uniform(1.0, 9);
  auto paths = euler_maruyama(
      grid, [](int) { return 0.0; }, [](int) { return 0.0; }, 20, 5, 0.7);
  for (int p = 0; p < 20; ++p)
    for (int t = 0; t < grid.size(); ++t) CHECK(paths.paths(p, t) == 0.7);
}

TEST_CASE("constant drift integrates exactly") {
  TimeGrid grid = TimeGrid::uniform(2.0, 17);
  auto paths = euler_maruyama(
      grid, [](int) { return 1.5; }, [](int) { return 0.0; }, 4, 5, 0.25);
  for (int p = 0; p < 4; ++p)
    CHECK(paths.paths(p, grid.size() - 1) == doctest::Approx(0.25 + 1.5 * 2.0).epsilon(1e-12));
}

TEST_CASE("constant-coefficient SDE matches its Gaussian law") {
  const int n_paths = 100000;
  TimeGrid grid = TimeGrid::uniform(1.0, 33);
  auto paths = euler_maruyama(
      grid, [](int) { return 1.0; }, [](int) { return 2.0; }, n_paths, 12345, 0.0);
  double mean = 0.0, m2 = 0.0;
  const int last = grid.size() - 1;
  for (int p = 0; p < n_paths; ++p) mean += paths.paths(p, last);
  mean /= n_paths;
  for (int p = 0; p < n_paths; ++p) {
    const double d = paths.paths(p, last) - mean;
    m2 += d * d;
  }
  const double var = m2 / (n_paths - 1);
  CHECK(std::abs(mean - 1.0) <= 3.0 * 2.0 / std::sqrt(double(n_paths)));
  CHECK(var == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("Euler-Maruyama strong order is at least 0.4") {
  // dU = U ds + 0.5 U dB has the exact solution
  // U(T) = U0 exp((1 - 0.5^2/2) T + 0.5 B(T)); drive every resolution with
  // the same Brownian increments drawn at the finest level.
  const int n_paths = 2000;
  const double u0 = 1.0, mu_c = 1.0, sg_c = 0.5, t_end = 1.0;
  const int finest = 64;
  CounterRng rng(777);
  std::vector<double> rms;
  std::vector<int> levels = {8, 16, 32, 64};
  for (int n_steps : levels) {
    const int sub = finest / n_steps;
    const double dt = t_end / n_steps;
    double acc = 0.0;
    for (int p = 0; p < n_paths; ++p) {
      double u = u0, b_total = 0.0;
      for (int t = 0; t < n_steps; ++t) {
        double db = 0.0;
        for (int q = 0; q < sub; ++q)
          db += std::sqrt(t_end / finest) *
                rng.normal(static_cast<std::uint64_t>(p),
                           static_cast<std::uint64_t>(t * sub + q));
        u += mu_c * u * dt + sg_c * u * db;
        b_total += db;
      }
      const double exact =
          u0 * std::exp((mu_c - 0.5 * sg_c * sg_c) * t_end + sg_c * b_total);
      acc += (u - exact) * (u - exact);
    }
    rms.push_back(std::sqrt(acc / n_paths));
  }
  // order estimate from the endpoints
  const double order = std::log(rms.front() / rms.back()) /
                       std::log(double(levels.back()) / levels.front());
  CHECK(order >= 0.4);
  for (size_t i = 1; i < rms.size(); ++i) CHECK(rms[i] < rms[i - 1]);
}

TEST_CASE("counter keys never collide across paths and steps") {
  CounterRng rng(9);
  std::set<std::uint64_t> seen;
  for (std::uint64_t p = 0; p < 64; ++p)
    for (std::uint64_t t = 0; t < 64; ++t)
      for (std::uint64_t lane = 0; lane < 2; ++lane)
        CHECK(seen.insert(rng.key(p, t, lane)).second);
}

TEST_CASE("simulation is deterministic in the seed") {
  TimeGrid grid = TimeGrid::uniform(1.0, 5);
  auto x = random_covariates(grid, 4, 2, 21);
  std::vector<Vec> betas(5, Vec::Ones(2));
  CoefPath truth = CoefPath::plain(grid, betas);
  const PenaltySpec spec = PenaltySpec::lasso(0.1);
  auto e1 = simulate_errors(truth, x, spec, BasisKind::Identity, 6, 99, 0.0);
  auto e2 = simulate_errors(truth, x, spec, BasisKind::Identity, 6, 99, 0.0);
  CHECK(e1.paths == e2.paths);
  auto e3 = simulate_errors(truth, x, spec, BasisKind::Identity, 6, 100, 0.0);
  CHECK(e1.paths != e3.paths);
}

TEST_CASE("generate_panel grid mismatch raises") {
  TimeGrid grid = TimeGrid::uniform(1.0, 5);
  auto x = random_covariates(TimeGrid::uniform(1.0, 4), 4, 2, 21);
  std::vector<Vec> betas(5, Vec::Ones(2));
  CoefPath truth = CoefPath::plain(grid, betas);
  CHECK_THROWS_AS(
      generate_panel(truth, x, PenaltySpec::lasso(0.1), BasisKind::Identity, 1, 1.0),
      GridMismatch);
}

TEST_CASE("objective_eval hand values") {
  TimeGrid grid = TimeGrid::uniform(1.0, 3);
  Mat x = Mat::Ones(1, 1);
  Vec y = Vec::Ones(1);
  Panel panel(grid, {y, y, y}, {x, x, x});
  // perfect fit
  std::vector<Vec> b1(3, Vec::Ones(1));
  CHECK(objective_eval(panel, CoefPath::plain(grid, b1), BasisKind::Identity) ==
        doctest::Approx(0.0));
  // constant residual r = 1 - 3 = -2 -> integral of 4 over [0,1]
  std::vector<Vec> b3(3, Vec(Vec::Constant(1, 3.0)));
  CHECK(objective_eval(panel, CoefPath::plain(grid, b3), BasisKind::Identity) ==
        doctest::Approx(4.0));
}
