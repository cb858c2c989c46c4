#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle_naive.hpp"
#include "rewave/lattice.hpp"
#include "rewave/rng.hpp"

using namespace rewave;

TEST_CASE("cell counts match the enumeration oracle") {
  for (double radius : {1.0, 2.0, 3.0, 4.0, 5.0, 12.5}) {
    CAPTURE(radius);
    const RetinaLattice lat = build_lattice(radius);
    CHECK(lat.cell_count() == oracle::enumerate_disc(radius).size());
  }
  // frozen oracle values
  CHECK(build_lattice(2.0).cell_count() == 19);
  CHECK(build_lattice(1.0).cell_count() == 7);
  CHECK(build_lattice(4.0).cell_count() == 61);
}

TEST_CASE("radius below one is rejected") {
  CHECK_THROWS_AS(build_lattice(0.5), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(0.999), std::invalid_argument);
  CHECK_THROWS_AS(neighbors(build_lattice(2.0), 0.9), std::invalid_argument);
}

TEST_CASE("cells agree with the oracle in order and position") {
  const RetinaLattice lat = build_lattice(3.0);
  const auto pts = oracle::enumerate_disc(3.0);
  REQUIRE(lat.cell_count() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(lat.cells[i].axial_q == pts[i].q);
    CHECK(lat.cells[i].axial_r == pts[i].r);
    CHECK(lat.cells[i].pos.x == pts[i].x);
    CHECK(lat.cells[i].pos.y == pts[i].y);
    CHECK(lat.cells[i].index == i);
  }
}

TEST_CASE("all cells lie inside the disc and are one unit apart") {
  const RetinaLattice lat = build_lattice(6.0);
  double min_d2 = 1e30;
  for (const Cell& a : lat.cells) {
    CHECK(a.pos.x * a.pos.x + a.pos.y * a.pos.y <=
          lat.radius * lat.radius + kGeomEps);
    for (const Cell& b : lat.cells) {
      if (a.index >= b.index) continue;
      const double dx = a.pos.x - b.pos.x;
      const double dy = a.pos.y - b.pos.y;
      min_d2 = std::min(min_d2, dx * dx + dy * dy);
    }
  }
  CHECK(min_d2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("boundary flags mark the rim ring") {
  const RetinaLattice lat = build_lattice(5.0);
  for (const Cell& c : lat.cells) {
    const double norm = std::hypot(c.pos.x, c.pos.y);
    CHECK(c.boundary == (lat.radius - norm < 1.0));
  }
  // the center is never boundary on any radius >= 2 lattice
  const auto center = lat.nearest_cell({0.0, 0.0});
  REQUIRE(center.has_value());
  CHECK_FALSE(lat.cells[*center].boundary);
}

TEST_CASE("building twice gives identical lattices") {
  const RetinaLattice a = build_lattice(7.0);
  const RetinaLattice b = build_lattice(7.0);
  REQUIRE(a.cell_count() == b.cell_count());
  for (std::size_t i = 0; i < a.cell_count(); ++i) {
    CHECK(a.cells[i].pos.x == b.cells[i].pos.x);
    CHECK(a.cells[i].pos.y == b.cells[i].pos.y);
    CHECK(a.cells[i].boundary == b.cells[i].boundary);
  }
  CHECK(a.bucket_offsets == b.bucket_offsets);
  CHECK(a.bucket_cells == b.bucket_cells);
}

TEST_CASE("cell count scales with area") {
  for (double radius : {8.0, 10.0}) {
    CAPTURE(radius);
    const double ratio =
        static_cast<double>(build_lattice(2 * radius).cell_count()) /
        static_cast<double>(build_lattice(radius).cell_count());
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("interior cells have exactly six neighbors for rho in [1, sqrt 3)") {
  const RetinaLattice lat = build_lattice(3.0);
  for (double rho : {1.0, 1.5, 1.7}) {
    CAPTURE(rho);
    const NeighborTable nbr = neighbors(lat, rho);
    for (const Cell& c : lat.cells) {
      if (c.boundary) continue;
      CHECK(nbr.degree(c.index) == 6);
    }
  }
}

TEST_CASE("neighbor lists are symmetric, sorted and oracle-exact") {
  const RetinaLattice lat = build_lattice(4.0);
  for (double rho : {1.0, 1.5, 2.0, 2.5}) {
    CAPTURE(rho);
    const NeighborTable nbr = neighbors(lat, rho);
    const double rho2 = rho * rho;
    for (const Cell& c : lat.cells) {
      const auto list = nbr.of(c.index);
      for (std::size_t k = 0; k + 1 < list.size(); ++k) {
        CHECK(list[k] < list[k + 1]);
      }
      // symmetry
      for (std::uint32_t j : list) {
        const auto back = nbr.of(j);
        CHECK(std::find(back.begin(), back.end(), c.index) != back.end());
      }
      // brute force over all pairs
      std::vector<std::uint32_t> expect;
      for (const Cell& d : lat.cells) {
        if (d.index == c.index) continue;
        const double dx = d.pos.x - c.pos.x;
        const double dy = d.pos.y - c.pos.y;
        if (dx * dx + dy * dy <= rho2 + kGeomEps) expect.push_back(d.index);
      }
      CHECK(std::vector<std::uint32_t>(list.begin(), list.end()) == expect);
    }
  }
}

TEST_CASE("seven-cell lattice: center has six neighbors, ring cells three") {
  const RetinaLattice lat = build_lattice(1.0);
  const NeighborTable nbr = neighbors(lat, 1.0);
  const auto center = lat.nearest_cell({0.0, 0.0});
  REQUIRE(center.has_value());
  for (const Cell& c : lat.cells) {
    CHECK(nbr.degree(c.index) == (c.index == *center ? 6 : 3));
  }
}

TEST_CASE("nearest cell: exact positions, outside points, oracle agreement") {
  const RetinaLattice lat = build_lattice(5.0);
  const auto pts = oracle::enumerate_disc(5.0);

  for (std::uint32_t k = 0; k < lat.cell_count(); k += 7) {
    CHECK(lat.nearest_cell(lat.cells[k].pos) == k);
  }
  CHECK_FALSE(lat.nearest_cell({5.1, 0.0}).has_value());
  CHECK_FALSE(lat.nearest_cell({4.0, 4.0}).has_value());

  const rng::Stream s(20240101);
  std::size_t tried = 0;
  for (std::uint64_t i = 0; tried < 100; ++i) {
    const double x = (s.uniform01(2 * i) * 2.0 - 1.0) * lat.radius;
    const double y = (s.uniform01(2 * i + 1) * 2.0 - 1.0) * lat.radius;
    if (x * x + y * y > lat.radius * lat.radius) continue;
    ++tried;
    CHECK(lat.nearest_cell({x, y}) ==
          oracle::nearest_linear(pts, lat.radius, x, y));
  }
}

TEST_CASE("nearest cell breaks ties toward the lowest index") {
  const RetinaLattice lat = build_lattice(2.0);
  // midpoint of two horizontally adjacent cells is equidistant to both
  const auto a = lat.nearest_cell({0.0, 0.0});
  REQUIRE(a.has_value());
  const Vec2 pa = lat.cells[*a].pos;
  const auto right = lat.nearest_cell({pa.x + 1.0, pa.y});
  REQUIRE(right.has_value());
  const auto mid = lat.nearest_cell({pa.x + 0.5, pa.y});
  REQUIRE(mid.has_value());
  CHECK(*mid == std::min(*a, *right));
}
