#include "bpreg/penalty.hpp"
#include "bpreg/sde.hpp"
#include "doctest.h"

using namespace bpreg;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Random beta kept away from 0 and from tied neighbours so every family is
// smooth there.
Vec smooth_beta(const CounterRng& rng, int j, std::uint64_t inst) {
  Vec b(j);
  for (int k = 0; k < j; ++k) {
    double v = rng.normal(inst, 40, static_cast<std::uint64_t>(k));
    if (std::abs(v) < 0.2) v = v < 0 ? v - 0.2 : v + 0.2;
    b(k) = v;
  }
  for (int k = 1; k < j; ++k)
    if (std::abs(b(k) - b(k - 1)) < 1e-3) b(k) += 0.1;
  return b;
}

PenaltySpec family_spec(Family f) {
  switch (f) {
    case Family::Lasso: return PenaltySpec::lasso(0.1);
    case Family::Ridge: return PenaltySpec::ridge(0.1);
    case Family::LpNorm: return PenaltySpec::lp_norm(0.1, 1.7);
    case Family::ElasticNet: return PenaltySpec::elastic_net(0.1, 0.4);
    case Family::FusedLasso: return PenaltySpec::fused_lasso(0.1, 0.6);
    case Family::Bridge: return PenaltySpec::bridge(0.1);
    case Family::GroupLasso: return PenaltySpec::group_lasso(0.1, 2);
    case Family::SplineCubic: return PenaltySpec::spline_cubic(0.1);
  }
  return {};
}

}  // namespace

TEST_CASE("drift hand values") {
  Mat x = Mat::Ones(1, 2);
  CHECK(drift(PenaltySpec::lasso(1.0), vec2(1, -2), 0.3, x) == doctest::Approx(3.0));
  CHECK(drift(PenaltySpec::ridge(1.0), vec2(1, -2), 0.3, x) == doctest::Approx(5.0));
  CHECK(drift(PenaltySpec::bridge(1.0), vec2(1, 4), 0.3, x) == doctest::Approx(9.0));
  CHECK(drift(PenaltySpec::lp_norm(1.0, 1.0), vec2(1, -2), 0.3, x) ==
        doctest::Approx(3.0));
  CHECK(drift(PenaltySpec::elastic_net(1.0, 0.25), vec2(1, -2), 0.3, x) ==
        doctest::Approx(0.75 * 3.0 + 0.25 * 5.0));
  CHECK(drift(PenaltySpec::fused_lasso(1.0, 0.6), vec2(1, -2), 0.3, x) ==
        doctest::Approx(0.6 * 3.0 + 0.4 * 3.0));
}

TEST_CASE("drift_grad hand values and non-smooth errors") {
  Mat x = Mat::Ones(1, 1);
  Vec b3(1);
  b3 << 3.0;
  CHECK(drift_grad(PenaltySpec::lasso(1.0), b3, 0, x) == doctest::Approx(1.0));
  Mat x2 = Mat::Ones(1, 2);
  CHECK(drift_grad(PenaltySpec::ridge(1.0), vec2(1, -2), 1, x2) == doctest::Approx(-4.0));
  Vec b0(1);
  b0 << 0.0;
  CHECK_THROWS_AS(drift_grad(PenaltySpec::lasso(1.0), b0, 0, x), NonDifferentiableAtZero);
  CHECK_THROWS_AS(drift_grad(PenaltySpec::fused_lasso(1.0, 0.5), vec2(1, 1), 0, x2),
                  TiedFusedPair);
}

TEST_CASE("drift_grad matches central finite differences on smooth branches") {
  CounterRng rng(11);
  const double h = 1e-6;
  for (Family f : {Family::Lasso, Family::Ridge, Family::LpNorm, Family::ElasticNet,
                   Family::FusedLasso, Family::Bridge, Family::GroupLasso,
                   Family::SplineCubic}) {
    PenaltySpec spec = family_spec(f);
    for (int inst = 0; inst < 100; ++inst) {
      const std::uint64_t ui = static_cast<std::uint64_t>(inst) +
                               1000 * static_cast<std::uint64_t>(f);
      int j = 2 + static_cast<int>(rng.uniform(ui, 0, 0) * 2.999);
      if (f == Family::GroupLasso) j = 2 * (1 + j % 2);
      Mat x(3, j);
      for (int i = 0; i < 3; ++i)
        for (int c = 0; c < j; ++c)
          x(i, c) = rng.normal(ui, 41, static_cast<std::uint64_t>(i * j + c));
      Vec beta = smooth_beta(rng, j, ui);
      const double s = rng.uniform(ui, 0, 1);
      for (int k = 0; k < j; ++k) {
        Vec bp = beta, bm = beta;
        bp(k) += h;
        bm(k) -= h;
        const double fd = (drift(spec, bp, s, x) - drift(spec, bm, s, x)) / (2 * h);
        const double an = drift_grad(spec, beta, k, x);
        CHECK(an == doctest::Approx(fd).epsilon(1e-6).scale(1.0 + std::abs(fd)));
      }
    }
  }
}

TEST_CASE("family reductions at the drift level") {
  CounterRng rng(13);
  Mat x = Mat::Ones(2, 3);
  for (int inst = 0; inst < 25; ++inst) {
    Vec b = smooth_beta(rng, 3, static_cast<std::uint64_t>(inst));
    const double s = 0.4;
    CHECK(drift(PenaltySpec::elastic_net(1.0, 1.0), b, s, x) ==
          doctest::Approx(drift(PenaltySpec::ridge(1.0), b, s, x)));
    CHECK(drift(PenaltySpec::elastic_net(1.0, 0.0), b, s, x) ==
          doctest::Approx(drift(PenaltySpec::lasso(1.0), b, s, x)));
    CHECK(drift(PenaltySpec::lp_norm(1.0, 1.0), b, s, x) ==
          doctest::Approx(drift(PenaltySpec::lasso(1.0), b, s, x)));
    // fused lasso -> lasso as the mixing weight approaches 1
    CHECK(drift(PenaltySpec::fused_lasso(1.0, 1.0 - 1e-12), b, s, x) ==
          doctest::Approx(drift(PenaltySpec::lasso(1.0), b, s, x)).epsilon(1e-9));
  }
}

TEST_CASE("diffusion is exactly homogeneous of degree 1") {
  CounterRng rng(17);
  for (int inst = 0; inst < 20; ++inst) {
    Mat x(4, 2);
    for (int i = 0; i < 4; ++i)
      for (int c = 0; c < 2; ++c)
        x(i, c) = rng.normal(static_cast<std::uint64_t>(inst), 42,
                             static_cast<std::uint64_t>(i * 2 + c));
    Vec b = smooth_beta(rng, 2, static_cast<std::uint64_t>(inst));
    const double c = 2.5;
    CHECK(diffusion(x, c * b, BasisKind::Identity) ==
          doctest::Approx(c * diffusion(x, b, BasisKind::Identity)));
    CHECK(diffusion(x, c * b, BasisKind::Cubic) ==
          doctest::Approx(c * diffusion(x, b, BasisKind::Cubic)));
  }
}

TEST_CASE("diffusion_grad hand values") {
  Mat x(2, 1);
  x << 1.0, 1.0;
  CHECK(diffusion_grad(x, 0, BasisKind::Identity) == doctest::Approx(4.0));
  Mat x2(1, 1);
  x2 << 2.0;
  CHECK(diffusion_grad(x2, 0, BasisKind::Cubic) == doctest::Approx(28.0));
  Mat z = Mat::Zero(3, 1);
  CHECK(diffusion_grad(z, 0, BasisKind::Identity) == doctest::Approx(0.0));
}
