#include "stsbo/grid.hpp"

#include "stsbo/error.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <Eigen/Core>

#include <cmath>
#include <vector>

using namespace stsbo;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("row-major flattening of a 2x2x2 cube") {
  const GridDomain g = build_grid({vec({0, 1}), vec({0, 1}), vec({0, 1})});
  REQUIRE(g.size() == 8);
  REQUIRE(g.dims == 3);
  CHECK(g.points(3, 0) == 0);
  CHECK(g.points(3, 1) == 1);
  CHECK(g.points(3, 2) == 1);
  // Last axis fastest: index -> digits is the base-2 expansion.
  for (Eigen::Index idx = 0; idx < 8; ++idx) {
    CHECK(g.points(idx, 0) == ((idx >> 2) & 1));
    CHECK(g.points(idx, 1) == ((idx >> 1) & 1));
    CHECK(g.points(idx, 2) == (idx & 1));
  }
}

TEST_CASE("row-major bijection on a ragged 2x3x4 grid") {
  const std::vector<Eigen::VectorXd> axes = {vec({0, 1}), vec({10, 20, 30}),
                                             vec({5, 6, 7, 8})};
  const GridDomain g = build_grid(axes);
  REQUIRE(g.size() == 24);
  Eigen::Index idx = 0;
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index b = 0; b < 3; ++b)
      for (Eigen::Index c = 0; c < 4; ++c, ++idx) {
        CHECK(g.points(idx, 0) == axes[0][a]);
        CHECK(g.points(idx, 1) == axes[1][b]);
        CHECK(g.points(idx, 2) == axes[2][c]);
      }
}

TEST_CASE("singleton grid") {
  const GridDomain g = build_grid({vec({3.5})});
  CHECK(g.size() == 1);
  CHECK(g.dims == 1);
  CHECK(g.points(0, 0) == 3.5);
}

TEST_CASE("build_grid rejects bad axes") {
  CHECK_THROWS_AS(build_grid({}), DomainError);
  CHECK_THROWS_AS(build_grid({Eigen::VectorXd()}), DomainError);
  CHECK_THROWS_AS(build_grid({vec({1, 1})}), DomainError);
  CHECK_THROWS_AS(build_grid({vec({2, 1})}), DomainError);
}

TEST_CASE("linear_axis covers the endpoint grid") {
  const Eigen::VectorXd axis = linear_axis(2.2, 6.0, 0.2);
  REQUIRE(axis.size() == 20);
  CHECK(axis[0] == doctest::Approx(2.2).epsilon(1e-12));
  CHECK(axis[19] == doctest::Approx(6.0).epsilon(1e-12));
  for (Eigen::Index i = 0; i + 1 < axis.size(); ++i)
    CHECK(axis[i + 1] - axis[i] == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(default_current_axis().isApprox(axis, 1e-12));
  CHECK_THROWS_AS(linear_axis(1, 0, 0.5), DomainError);
  CHECK_THROWS_AS(linear_axis(0, 1, 0), DomainError);
}

TEST_CASE("mask_points keeps order and coordinates") {
  const GridDomain g = build_grid({vec({0, 1}), vec({0, 1})});
  const GridDomain m = mask_points(g, {true, false, true, true});
  REQUIRE(m.size() == 3);
  CHECK(m.dims == 2);
  CHECK((m.points.row(0).array() == g.points.row(0).array()).all());
  CHECK((m.points.row(1).array() == g.points.row(2).array()).all());
  CHECK((m.points.row(2).array() == g.points.row(3).array()).all());
  CHECK_THROWS_AS(mask_points(g, {true, false}), DomainError);
  CHECK_THROWS_AS(mask_points(g, {false, false, false, false}), DomainError);
}

TEST_CASE("write_grid_csv emits one row per point") {
  testutil::TempDir dir("grid");
  const GridDomain g = build_grid({vec({0, 1}), vec({2, 3})});
  const std::string path = dir.file("grid.csv");
  write_grid_csv(g, path);
  const auto lines = testutil::read_lines(path);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0].find("coord_0") != std::string::npos);
}

TEST_CASE("protocol arithmetic at the fast corner") {
  const ChargingProtocol p = protocol_from_currents(6.0, 6.0, 800.0, kDefaultDq,
                                                    std::numeric_limits<double>::infinity());
  CHECK(p.feasible);
  CHECK(p.t1 == doctest::Approx(120.0).epsilon(1e-12));
  CHECK(p.t2 == doctest::Approx(120.0).epsilon(1e-12));
  REQUIRE(p.t3.has_value());
  REQUIRE(p.i3.has_value());
  CHECK(*p.t3 == doctest::Approx(560.0).epsilon(1e-12));
  CHECK(*p.i3 == doctest::Approx(2.5714285714285716).epsilon(1e-12));
}

TEST_CASE("protocol arithmetic at the slow corner") {
  const ChargingProtocol p = protocol_from_currents(2.2, 2.2, 800.0, kDefaultDq,
                                                    std::numeric_limits<double>::infinity());
  CHECK(p.feasible);
  CHECK(p.t1 == doctest::Approx(327.27272727272727).epsilon(1e-12));
  REQUIRE(p.t3.has_value());
  REQUIRE(p.i3.has_value());
  CHECK(*p.t3 == doctest::Approx(145.45454545454547).epsilon(1e-12));
  CHECK(*p.i3 == doctest::Approx(9.9).epsilon(1e-12));
}

TEST_CASE("protocol infeasible when stage three has no time left") {
  const ChargingProtocol p = protocol_from_currents(1.0, 1.0, 800.0, kDefaultDq,
                                                    std::numeric_limits<double>::infinity());
  CHECK_FALSE(p.feasible);
  CHECK_FALSE(p.t3.has_value());
  CHECK_FALSE(p.i3.has_value());
}

TEST_CASE("protocol infeasible when the pinned rate exceeds the cap") {
  const ChargingProtocol p = protocol_from_currents(6.0, 6.0, 800.0, kDefaultDq, 2.0);
  CHECK_FALSE(p.feasible);
  REQUIRE(p.i3.has_value());
  CHECK(*p.i3 > 2.0);
}

TEST_CASE("default benchmark keeps all 400 points and its identities") {
  const ChargingBenchmark bench = build_charging_benchmark(default_current_axis(),
                                                           default_current_axis());
  REQUIRE(bench.grid.size() == 400);
  REQUIRE(bench.protocols.size() == 400);
  for (Eigen::Index i = 0; i < 400; ++i) {
    const ChargingProtocol& p = bench.protocols[static_cast<std::size_t>(i)];
    REQUIRE(p.feasible);
    CHECK(p.i1 == bench.grid.points(i, 0));
    CHECK(p.i2 == bench.grid.points(i, 1));
    // Stage times fill the protocol window exactly.
    CHECK(p.t1 + p.t2 + *p.t3 == doctest::Approx(800.0).epsilon(1e-9));
    // Charge balance: the delivered fractions sum to t_f in C-rate hours.
    const double hours = 0.2 / p.i1 + 0.2 / p.i2 + 0.4 / *p.i3;
    CHECK(hours == doctest::Approx(800.0 / 3600.0).epsilon(1e-12));
  }
}

TEST_CASE("faster early stages leave more stage-three time") {
  const ChargingBenchmark bench = build_charging_benchmark(default_current_axis(),
                                                           default_current_axis());
  // Row-major layout: index = i1_index * 20 + i2_index.
  for (int j = 0; j < 20; ++j) {
    for (int a = 0; a + 1 < 20; ++a) {
      const auto& lo = bench.protocols[static_cast<std::size_t>(a * 20 + j)];
      const auto& hi = bench.protocols[static_cast<std::size_t>((a + 1) * 20 + j)];
      CHECK(*hi.t3 > *lo.t3);
      CHECK(*hi.i3 < *lo.i3);
    }
  }
}

TEST_CASE("stage-three cap masks the slow corner") {
  const ChargingBenchmark bench =
      build_charging_benchmark(default_current_axis(), default_current_axis(), 800.0, kDefaultDq, 5.0);
  CHECK(bench.grid.size() < 400);
  CHECK(bench.grid.size() == static_cast<Eigen::Index>(bench.protocols.size()));
  for (const ChargingProtocol& p : bench.protocols) {
    CHECK(p.feasible);
    CHECK(*p.i3 <= 5.0);
  }
}

}  // TEST_SUITE
