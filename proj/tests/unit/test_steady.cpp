#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polaris/acceptance.hpp"
#include "polaris/diagnostics.hpp"
#include "polaris/elliptic.hpp"
#include "polaris/errors.hpp"
#include "polaris/steady.hpp"

using namespace polaris;
using std::numbers::pi;

namespace {
double rel_l2(const Mesh& m, const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += m.cells()[i].measure * (a[i] - b[i]) * (a[i] - b[i]);
    den += m.cells()[i].measure * b[i] * b[i];
  }
  return std::sqrt(num / den);
}
}  // namespace

TEST_CASE("spherical family: zero mass") {
  const auto s = spherical_steady_state(Parameters{}, 1.0, 0.0, 16);
  CHECK(s.u0 == 0.0);
  for (double v : s.V) CHECK(v == 0.0);
  for (double v : s.c) CHECK(v == 0.0);
  CHECK_THROWS_AS(spherical_steady_state(Parameters{}, 1.0, -1.0, 16), ConfigError);
}

TEST_CASE("spherical family: no source") {
  Parameters p;
  p.beta = 0.0;
  p.k1 = 2.0;
  p.k2 = 3.0;
  const double R = 1.3, M = 2.0;
  const auto s = spherical_steady_state(p, R, M, 16);
  const double u0 = M / (4 * pi * R * R + 4 * pi / 3 * R * R * R * p.k2 / p.k1);
  CHECK(s.u0 == doctest::Approx(u0).epsilon(1e-11));
  for (double v : s.c) CHECK(v == 0.0);
  for (double v : s.V) CHECK(v == doctest::Approx(p.k2 / p.k1 * u0).epsilon(1e-11));
}

TEST_CASE("spherical family: pinned regression value") {
  const auto s = spherical_steady_state(Parameters{}, 1.0, 1.0, 64);
  CHECK(s.u0 == doctest::Approx(kSphericalU0DefaultMass1).epsilon(1e-10));
  const auto roots = spherical_steady_roots(Parameters{}, 1.0, 1.0, 64);
  REQUIRE(!roots.empty());
  CHECK(roots.front() == s.u0);
  const double lo = spherical_total_mass(Parameters{}, 1.0, s.u0 * (1 - 1e-9), 4096);
  const double hi = spherical_total_mass(Parameters{}, 1.0, s.u0 * (1 + 1e-9), 4096);
  CHECK(lo <= 1.0);
  CHECK(hi >= 1.0);
}

TEST_CASE("stationary drift-diffusion") {
  const auto mesh = build_radial_ball_mesh(1.0, 12);
  Parameters p;
  p.k1 = 2.0;
  p.k2 = 0.5;
  std::vector<double> c(12);
  for (std::size_t i = 0; i < 12; ++i) c[i] = 0.3 * mesh.cells()[i].r * mesh.cells()[i].r;
  for (double v : solve_stationary_V(mesh, p, c, std::vector<double>{0.0})) CHECK(v == 0.0);
  for (double v : solve_stationary_V(mesh, p, std::vector<double>(12, 0.0), std::vector<double>{0.8}))
    CHECK(v == doctest::Approx(0.2).epsilon(1e-11));

  // zero-flux discrete profile V_K proportional to exp(c_K / D)
  const auto V = solve_stationary_V(mesh, p, c, std::vector<double>{0.8});
  for (std::size_t i = 0; i < 12; ++i)
    CHECK(V[i] == doctest::Approx(0.2 * std::exp((c[i] - c[11]) / p.D)).epsilon(1e-10));
}

TEST_CASE("stationary V converges to the Boltzmann profile") {
  Parameters p;
  const double u0 = 0.5;
  const auto prof = spherical_profile(p, 1.0, u0);
  double prev = 0.0;
  for (std::size_t n : {16u, 32u, 64u, 128u}) {
    const auto mesh = build_radial_ball_mesh(1.0, n);
    std::vector<double> c(n), exact(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = prof.c(mesh.cells()[i].r);
      exact[i] = prof.V(mesh.cells()[i].r);
    }
    const auto V = solve_stationary_V(mesh, p, c, std::vector<double>{u0});
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(V[i] - exact[i]) / exact[i]);
    if (prev > 0.0) CHECK(std::log2(prev / err) >= 0.9);
    prev = err;
  }
}

TEST_CASE("surface Helmholtz") {
  const auto mesh = build_disk_mesh(2.0, 2, 256);
  for (double v : solve_surface_helmholtz(mesh, 0.1, 1.5, std::vector<double>(256, 0.0))) CHECK(v == 0.0);
  for (double v : solve_surface_helmholtz(mesh, 0.1, 1.5, std::vector<double>(256, 3.0)))
    CHECK(v == doctest::Approx(2.0).epsilon(1e-11));
  std::vector<double> rhs(256);
  for (std::size_t i = 0; i < 256; ++i) rhs[i] = std::cos(mesh.surface_nodes()[i].theta);
  const auto u = solve_surface_helmholtz(mesh, 0.1, 1.5, rhs);
  for (std::size_t i = 0; i < 256; ++i) CHECK(std::abs(u[i] - rhs[i] / (1.5 + 0.1 / 4.0)) <= 1e-5);
}

TEST_CASE("fixed point: trivial cases") {
  const auto disk = build_disk_mesh(1.0, 6, 12);
  const auto zero = fixed_point_steady(disk, Parameters{}, 0.0);
  CHECK(zero.converged);
  CHECK(zero.iterations <= 1);
  for (double v : zero.V) CHECK(v == 0.0);

  Parameters p;
  p.beta = 0.0;
  p.k2 = 2.0;
  const double mu = 0.3;
  const auto s = fixed_point_steady(disk, p, mu);
  CHECK(s.converged);
  CHECK(s.iterations <= 2);
  const double level = mu / disk.surface_measure();
  for (double v : s.u) CHECK(v == doctest::Approx(level).epsilon(1e-10));
  for (double v : s.V) CHECK(v == doctest::Approx(p.k2 / p.k1 * level).epsilon(1e-10));
  for (double v : s.c) CHECK(v == 0.0);
  CHECK_THROWS(fixed_point_steady(disk, p, -1.0));
}

TEST_CASE("fixed point agrees with the spherical family") {
  const auto mesh = build_radial_ball_mesh(1.0, 32);
  Parameters p;
  const auto fp = fixed_point_steady(mesh, p, 0.05);
  REQUIRE(fp.converged);
  CHECK(fp.residual.V <= 1e-8);
  CHECK(fp.residual.c <= 1e-8);
  CHECK(fp.residual.u <= 1e-8);
  CHECK(fp.max_mass_drift <= 1e-10);
  const auto sph = spherical_steady_state(p, 1.0, fp.total_mass, 32);
  CHECK(rel_l2(mesh, fp.V, sph.V) <= 1e-3);

  double trace_mass = 0.0;
  const auto tr = trace(mesh, fp.V);
  for (std::size_t i = 0; i < tr.size(); ++i) trace_mass += mesh.surface_nodes()[i].measure * tr[i];
  CHECK(std::abs(trace_mass - p.k2 / p.k1 * fp.mu) <= 1e-8 * fp.mu);
  for (double v : fp.V) CHECK(v >= 0.0);
}
