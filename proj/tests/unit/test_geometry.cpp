#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "polaris/errors.hpp"
#include "polaris/geometry.hpp"

using namespace polaris;
using std::numbers::pi;

TEST_CASE("radial ball measures") {
  const auto one = build_radial_ball_mesh(1.0, 1);
  REQUIRE(one.num_cells() == 1);
  REQUIRE(one.num_nodes() == 1);
  CHECK(one.cells()[0].measure == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-14));
  CHECK(one.boundary_faces()[0].measure == doctest::Approx(4.0 * pi).epsilon(1e-14));

  const auto four = build_radial_ball_mesh(1.0, 4);
  CHECK(std::abs(four.bulk_measure() - 4.0 * pi / 3.0) <= 1e-12);

  const auto big = build_radial_ball_mesh(2.0, 10);
  CHECK(std::abs(big.surface_measure() - 16.0 * pi) <= 1e-12);
  CHECK(big.interior_faces().size() == 9);
}

TEST_CASE("disk measures") {
  const auto m = build_disk_mesh(1.0, 2, 8);
  CHECK(m.num_cells() == 16);
  REQUIRE(m.num_nodes() == 8);
  for (const auto& node : m.surface_nodes()) CHECK(node.measure == doctest::Approx(2.0 * pi / 8.0).epsilon(1e-14));
  CHECK(std::abs(m.surface_measure() - 2.0 * pi) <= 1e-12);

  const auto tri = build_disk_mesh(1.0, 1, 3);
  CHECK(tri.num_cells() == 3);
  CHECK(std::abs(tri.bulk_measure() - pi) <= 1e-12);

  const auto wide = build_disk_mesh(3.0, 5, 16);
  CHECK(std::abs(wide.bulk_measure() - 9.0 * pi) <= 1e-12);
  CHECK(std::abs(wide.bulk_measure() - wide.exact_bulk_measure()) <= 1e-12);
}

TEST_CASE("invalid mesh arguments are rejected") {
  CHECK_THROWS(build_radial_ball_mesh(0.0, 4));
  CHECK_THROWS(build_radial_ball_mesh(1.0, 0));
  CHECK_THROWS(build_disk_mesh(1.0, 2, 2));
  CHECK_THROWS(build_disk_mesh(-1.0, 2, 8));
}

TEST_CASE("boundary faces and surface nodes are in bijection") {
  for (const auto& m : {build_disk_mesh(1.0, 3, 12), build_radial_ball_mesh(1.0, 5)}) {
    REQUIRE(m.boundary_faces().size() == m.num_nodes());
    std::set<std::size_t> seen;
    for (std::size_t f = 0; f < m.boundary_faces().size(); ++f) {
      const auto node = m.boundary_faces()[f].node;
      CHECK(m.surface_nodes()[node].face == f);
      CHECK(m.boundary_faces()[f].measure == doctest::Approx(m.surface_nodes()[node].measure));
      seen.insert(node);
    }
    CHECK(seen.size() == m.num_nodes());
  }
}

TEST_CASE("trace") {
  const auto m = build_disk_mesh(1.0, 4, 16);
  std::vector<double> three(m.num_cells(), 3.0);
  for (double v : trace(m, three)) CHECK(v == 3.0);
  std::vector<double> zero(m.num_cells(), 0.0);
  for (double v : trace(m, zero)) CHECK(v == 0.0);

  std::vector<double> field(m.num_cells(), 0.0);
  for (std::size_t k = 0; k < 16; ++k) {
    const auto idx = m.cell_index(3, k);
    field[idx] = std::cos(m.cells()[idx].theta);
  }
  const auto tr = trace(m, field);
  for (std::size_t i = 0; i < m.num_nodes(); ++i)
    CHECK(tr[i] == doctest::Approx(std::cos(m.surface_nodes()[i].theta)).epsilon(1e-14));

  CHECK_THROWS_AS(trace(m, std::vector<double>(3, 1.0)), ContractError);
}

TEST_CASE("Laplace-Beltrami on the circle converges at second order") {
  const double R = 1.5;
  double prev = 0.0;
  for (std::size_t nt : {32u, 64u, 128u, 256u}) {
    const auto m = build_disk_mesh(R, 2, nt);
    std::vector<double> u(m.num_nodes());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::cos(2.0 * m.surface_nodes()[i].theta);
    const auto lu = laplace_beltrami(m, u);
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(lu[i] + 4.0 * u[i] / (R * R)));
    if (prev > 0.0) CHECK(std::log2(prev / err) >= 1.9);
    prev = err;
  }
}

TEST_CASE("Laplace-Beltrami annihilates constants and vanishes on the sphere") {
  const auto disk = build_disk_mesh(1.0, 2, 10);
  for (double v : laplace_beltrami(disk, std::vector<double>(10, 2.5))) CHECK(std::abs(v) <= 1e-12);
  const auto ball = build_radial_ball_mesh(1.0, 3);
  CHECK(laplace_beltrami(ball, std::vector<double>{7.0})[0] == 0.0);
}
