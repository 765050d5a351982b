#include <doctest.h>

#include <sstream>

#include "fedpart/equilibria.hpp"
#include "support.hpp"

using namespace fedpart;

namespace {

std::vector<Count> points(const std::vector<EquilibriumReport>& reports) {
  std::vector<Count> out;
  for (const auto& r : reports) out.push_back(r.point);
  return out;
}

}  // namespace

TEST_CASE("three-client example") {
  const RealizationMap h(test::homogeneous({0.1, 0.2, 5.0}, 10, 1.0));
  const auto reports = enumerate_fixed_points(h);
  CHECK(points(reports) == std::vector<Count>{0, 2});
  CHECK(reports[0].kind == EquilibriumKind::stable);
  // h(1) = 0 repels downward while h(3) = 2 returns: neither pattern, so flat
  CHECK(reports[1].kind == EquilibriumKind::flat);
  CHECK(reports[1].h_below == 0);
  CHECK(reports[1].h_above == 2);
  CHECK_FALSE(reports[0].h_below.has_value());
}

TEST_CASE("mirrored costs") {
  // the first client's floor cost sits above U(1) = 0, so 1 is not fixed
  const RealizationMap h(test::mirror());
  CHECK(h(1) == 0);
  std::vector<Count> expected{0};
  for (Count k = 2; k <= 20; ++k) expected.push_back(k);
  const auto reports = enumerate_fixed_points(h);
  CHECK(points(reports) == expected);
  for (const auto& r : reports) {
    if (r.point >= 3 && r.point < 20) CHECK(r.kind == EquilibriumKind::flat);
  }
  CHECK(classify(0, h) == EquilibriumKind::stable);
  CHECK(classify(20, h) == EquilibriumKind::flat);
  for (Count k = 2; k <= 20; ++k) CHECK(find_equilibrium_above(k, h) == k);
}

TEST_CASE("nobody affordable") {
  const RealizationMap h(test::homogeneous({50.0, 60.0, 70.0}, 10, 1.0));
  const auto reports = enumerate_fixed_points(h);
  CHECK(points(reports) == std::vector<Count>{0});
  CHECK(reports[0].kind == EquilibriumKind::stable);
}

TEST_CASE("boundary classification") {
  // near-zero costs: everyone joins once two are expected
  const RealizationMap cheap(test::homogeneous({1e-9, 1e-9, 1e-9}, 4, 1.0));
  CHECK(classify(3, cheap) == EquilibriumKind::stable);
  CHECK_THROWS_AS(classify(1, cheap), std::invalid_argument);

  const RealizationMap single(test::homogeneous({1.0}, 4, 1.0));
  CHECK(classify(0, single) == EquilibriumKind::stable);
}

TEST_CASE("tipping point between two stable points") {
  // U(K, 1, 0.5) for K = 1..5: 0, 1, 1.444, 1.6875, 1.84; h = 0, 0, 1, 3, 5, 5
  const RealizationMap h(test::homogeneous({0.5, 1.2, 1.3, 1.6, 1.65}, 1, 0.5));
  CHECK(h(1) == 0);
  CHECK(h(2) == 1);
  CHECK(h(3) == 3);
  CHECK(h(4) == 5);
  CHECK(points(enumerate_fixed_points(h)) == std::vector<Count>{0, 3, 5});
  CHECK(classify(0, h) == EquilibriumKind::stable);
  CHECK(classify(3, h) == EquilibriumKind::tipping);
  CHECK(classify(5, h) == EquilibriumKind::stable);
  CHECK(find_equilibrium_above(3, h) == 3);
  CHECK(find_equilibrium_above(4, h) == 5);
}

TEST_CASE("iterating upward") {
  const RealizationMap h(test::homogeneous({0.1, 0.2, 5.0}, 10, 1.0));
  CHECK(find_equilibrium_above(2, h) == 2);
  CHECK(find_equilibrium_above(0, h) == 0);
  CHECK_THROWS_AS(find_equilibrium_above(1, h), std::invalid_argument);

  const RealizationMap cheap(test::homogeneous({1e-9, 1e-9, 1e-9, 1e-9}, 4, 1.0));
  CHECK(find_equilibrium_above(2, cheap) == 4);
}

TEST_CASE("basins of the three-client example") {
  const auto s = test::homogeneous({0.1, 0.2, 5.0}, 10, 1.0);
  const auto b = basins(s);
  REQUIRE(b.size() == 4);
  CHECK(b[0] == 0);
  CHECK(b[1] == 0);
  CHECK(b[2] == 2);
  CHECK(b[3] == 2);

  std::ostringstream csv;
  write_equilibria_csv(csv, enumerate_fixed_points(RealizationMap(s)), b);
  CHECK(csv.str() ==
        "point,kind,h_below,h_above,basin_size,basin_min,basin_max\n"
        "0,stable,,0,2,0,1\n"
        "2,flat,0,2,2,2,3\n");

  std::ostringstream curve;
  write_h_curve_csv(curve, RealizationMap(s));
  CHECK(curve.str() == "x,h\n0,0\n1,0\n2,2\n3,2\n");

  std::ostringstream basin_csv;
  write_basins_csv(basin_csv, b);
  CHECK(basin_csv.str() == "start,limit\n0,0\n1,0\n2,2\n3,2\n");
}

TEST_CASE("everything below the first tipping point collapses") {
  const auto b = basins(test::homogeneous({0.5, 1.2, 1.3, 1.6, 1.65}, 1, 0.5));
  CHECK(b == std::vector<std::optional<Count>>{0, 0, 0, 3, 5, 5});
}

TEST_CASE("a cycling dynamic has no basin limit") {
  const auto b = basins(test::four_client_oracle({0.05, 0.3, 0.75, 0.9}));
  bool any_missing = false;
  for (const auto& v : b) any_missing = any_missing || !v.has_value();
  CHECK(any_missing);
}
