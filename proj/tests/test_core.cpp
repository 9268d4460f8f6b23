#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>

#include "bpreg/csv.hpp"
#include "bpreg/penalty.hpp"
#include "bpreg/sde.hpp"
#include "bpreg/types.hpp"
#include "doctest.h"

using namespace bpreg;

namespace {

std::vector<PanelRow> small_rows() {
  // 2 times x 2 cases x 1 covariate
  return {
      {0.0, 1, 1.0, {0.5}}, {0.0, 2, 2.0, {1.5}},
      {0.5, 1, 1.1, {0.6}}, {0.5, 2, 2.1, {1.6}},
  };
}

}  // namespace

TEST_CASE("time grid invariants") {
  CHECK_THROWS_AS(TimeGrid({0.0}), InvalidSpec);
  CHECK_THROWS_AS(TimeGrid({0.0, 0.0}), InvalidSpec);
  CHECK_THROWS_AS(TimeGrid({0.5, 0.2}), InvalidSpec);
  CHECK_THROWS_AS(TimeGrid({-0.1, 0.2}), InvalidSpec);
  TimeGrid g = TimeGrid::uniform(1.0, 5);
  CHECK(g.size() == 5);
  CHECK(g[0] == doctest::Approx(0.0));
  CHECK(g[4] == doctest::Approx(1.0));
  // non-uniform accepted
  CHECK_NOTHROW(TimeGrid({0.0, 0.1, 0.7}));
}

TEST_CASE("validate_panel accepts a complete balanced panel") {
  Panel p = validate_panel(small_rows());
  CHECK(p.n_cases() == 2);
  CHECK(p.n_covariates() == 1);
  CHECK(p.n_times() == 2);
  CHECK(p.y(0)(1) == doctest::Approx(2.0));
  CHECK(p.x(1)(0, 0) == doctest::Approx(0.6));
}

TEST_CASE("validate_panel rejects a missing case") {
  auto rows = small_rows();
  rows.pop_back();  // drop case 2 at t=0.5
  CHECK_THROWS_AS(validate_panel(rows), MissingCase);
}

TEST_CASE("validate_panel rejects ragged covariates") {
  auto rows = small_rows();
  rows[2].x.push_back(3.0);
  CHECK_THROWS_AS(validate_panel(rows), RaggedJ);
}

TEST_CASE("validate_panel rejects non-finite values") {
  auto rows = small_rows();
  rows[1].y = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate_panel(rows), NonFiniteValue);
}

TEST_CASE("validate_panel rejects duplicate (t,i) rows") {
  auto rows = small_rows();
  rows.push_back(rows[0]);
  CHECK_THROWS_AS(validate_panel(rows), MissingCase);
}

TEST_CASE("panel round-trips through rows regardless of order") {
  auto rows = small_rows();
  Panel p1 = validate_panel(rows);
  std::reverse(rows.begin(), rows.end());
  Panel p2 = validate_panel(rows);
  CHECK(p1 == p2);
  Panel p3 = validate_panel(panel_to_rows(p1));
  CHECK(p1 == p3);
}

TEST_CASE("panel round-trips through CSV byte-exactly") {
  TimeGrid grid = TimeGrid::uniform(1.0, 4);
  auto x = random_covariates(grid, 5, 3, 42);
  std::vector<Vec> ys;
  CounterRng rng(7);
  for (int t = 0; t < grid.size(); ++t) {
    Vec y(5);
    for (int i = 0; i < 5; ++i) y(i) = rng.normal(static_cast<std::uint64_t>(t), 9, i);
    ys.push_back(y);
  }
  Panel p(grid, ys, x);
  const auto tmp = std::filesystem::temp_directory_path() / "roundtrip_panel.csv";
  write_panel_csv(tmp.string(), p);
  Panel q = read_panel_csv(tmp.string());
  CHECK(p == q);
  std::filesystem::remove(tmp);
}

TEST_CASE("penalty spec validation") {
  PenaltySpec en = PenaltySpec::elastic_net(0.1, 1.5);
  CHECK_THROWS_WITH_AS(en.validate(2), doctest::Contains("alpha"), InvalidSpec);
  CHECK_NOTHROW(PenaltySpec::elastic_net(0.1, 1.0).validate(2));
  CHECK_THROWS_AS(PenaltySpec::lp_norm(0.1, 0.0).validate(2), InvalidSpec);
  CHECK_THROWS_AS(PenaltySpec::fused_lasso(0.1, 1.0).validate(2), InvalidSpec);
  CHECK_THROWS_AS(PenaltySpec::lasso(-1.0).validate(2), InvalidSpec);
  // group lasso: J must be a multiple of the block size, K must be SPD
  CHECK_THROWS_AS(PenaltySpec::group_lasso(0.1, 2).validate(3), InvalidSpec);
  Mat bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // symmetric, not PD
  CHECK_THROWS_AS(PenaltySpec::group_lasso(0.1, 2, {bad}).validate(2), InvalidSpec);
  Mat good(2, 2);
  good << 2.0, 0.5, 0.5, 1.0;
  CHECK_NOTHROW(PenaltySpec::group_lasso(0.1, 2, {good}).validate(2));
}

TEST_CASE("family and basis names round-trip") {
  for (Family f : {Family::Lasso, Family::Ridge, Family::LpNorm, Family::ElasticNet,
                   Family::FusedLasso, Family::Bridge, Family::GroupLasso,
                   Family::SplineCubic})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_THROWS_AS(family_from_name("scad"), ConfigError);
  CHECK(basis_from_name("identity") == BasisKind::Identity);
  CHECK(basis_from_name("cubic") == BasisKind::Cubic);
  CHECK_THROWS_AS(basis_from_name("quartic"), ConfigError);
}

TEST_CASE("apply_basis identity is the identity map") {
  TimeGrid grid = TimeGrid::uniform(1.0, 2);
  auto xs = random_covariates(grid, 6, 3, 3);
  for (const auto& x : xs) CHECK((apply_basis(x, BasisKind::Identity) - x).norm() == 0.0);
}

TEST_CASE("cubic basis values") {
  CHECK(basis_value(1.0, BasisKind::Cubic) == doctest::Approx(3.0));
  CHECK(basis_value(-1.0, BasisKind::Cubic) == doctest::Approx(-1.0));
  CHECK(basis_value(2.0, BasisKind::Cubic) == doctest::Approx(14.0));
}
