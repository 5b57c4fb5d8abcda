#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polaris/diagnostics.hpp"

using namespace polaris;
using std::numbers::pi;

namespace {
State constant_state(const Mesh& m, double V, double u) {
  return {0.0, std::vector<double>(m.num_cells(), V), std::vector<double>(m.num_nodes(), u), {}};
}

DiagnosticsRow row(double t, double L4V, double L4u) {
  DiagnosticsRow r;
  r.t = t;
  r.L4_V = L4V;
  r.L4_u = L4u;
  r.p_values = {4.0};
  r.Q = {L4V * L4V * L4V * L4V + L4u * L4u * L4u * L4u};
  return r;
}
}  // namespace

TEST_CASE("total mass") {
  const auto ball = build_radial_ball_mesh(1.0, 8);
  const auto disk = build_disk_mesh(1.0, 8, 16);
  CHECK(total_mass(ball, constant_state(ball, 1, 1)) == doctest::Approx(4 * pi / 3 + 4 * pi).epsilon(1e-13));
  CHECK(total_mass(ball, constant_state(ball, 0, 0)) == 0.0);
  CHECK(total_mass(disk, constant_state(disk, 2, 0.5)) == doctest::Approx(3 * pi).epsilon(1e-13));
}

TEST_CASE("Q_p") {
  const auto ball = build_radial_ball_mesh(1.0, 8);
  const auto disk = build_disk_mesh(1.0, 8, 16);
  Parameters p;
  CHECK(q_p(ball, p, constant_state(ball, 0, 0), 3.0) == 0.0);
  CHECK(q_p(ball, p, constant_state(ball, 1, 1), 2.0) == doctest::Approx(4 * pi / 3 + 4 * pi).epsilon(1e-13));
  p.k2 = 4.0;
  CHECK(q_p(disk, p, constant_state(disk, 1, 1), 1.5) == doctest::Approx(7 * pi).epsilon(1e-13));
  CHECK_THROWS(q_p(disk, p, constant_state(disk, 1, 1), 1.0));
}

TEST_CASE("L^p norms") {
  const auto ball = build_radial_ball_mesh(1.0, 8);
  const auto disk = build_disk_mesh(1.0, 8, 16);
  CHECK(lp_norm(disk, std::vector<double>(16, 1.0), Domain::Surface, 2) == doctest::Approx(std::sqrt(2 * pi)).epsilon(1e-13));
  CHECK(lp_norm(disk, std::vector<double>(128, 0.0), Domain::Bulk, 2) == 0.0);
  CHECK(lp_norm(ball, std::vector<double>(8, 2.0), Domain::Bulk, 4) ==
        doctest::Approx(2 * std::pow(4 * pi / 3, 0.25)).epsilon(1e-13));
}

TEST_CASE("Q_2 matches the L^2 norms and rows are reproducible") {
  const auto disk = build_disk_mesh(1.0, 6, 12);
  Parameters p;
  p.k2 = 3.0;
  State s = constant_state(disk, 0, 0);
  for (std::size_t i = 0; i < s.V.size(); ++i) s.V[i] = 0.1 * double(i % 7);
  for (std::size_t i = 0; i < s.u.size(); ++i) s.u[i] = 0.3 + 0.05 * double(i);
  const double lv = lp_norm(disk, s.V, Domain::Bulk, 2), lu = lp_norm(disk, s.u, Domain::Surface, 2);
  CHECK(q_p(disk, p, s, 2.0) == doctest::Approx(lv * lv + 3.0 * lu * lu).epsilon(1e-14));
  const auto a = compute_row(disk, p, s, 0.1, {4.0, 2.0}, 3);
  const auto b = compute_row(disk, p, s, 0.1, {4.0, 2.0}, 3);
  CHECK(a == b);
  CHECK(a.p_values == std::vector<double>{2.0, 4.0});
  CHECK(a.M == total_mass(disk, s));
  CHECK(a.limiter_count == 3);
  CHECK(std::isnan(a.q_for(3.0)));
}

TEST_CASE("blow-up monitor") {
  std::vector<DiagnosticsRow> flat{row(0, 1, 1), row(1, 1, 1), row(2, 1, 1)};
  auto rep = blowup_indicator(flat);
  CHECK(rep.growth_L4_V == 1.0);
  CHECK(rep.growth_L4_u == 1.0);
  CHECK_FALSE(rep.V_exceeded);
  CHECK_FALSE(rep.concurrent);
  CHECK(rep.one_norm_bounded);

  std::vector<DiagnosticsRow> only_v{row(0, 1, 1), row(1, 5, 1), row(2.5, 20, 1)};
  rep = blowup_indicator(only_v);
  CHECK(rep.V_exceeded);
  CHECK_FALSE(rep.u_exceeded);
  CHECK_FALSE(rep.concurrent);

  std::vector<DiagnosticsRow> both{row(0, 1, 1), row(4.2, 11, 2), row(5.9, 12, 15)};
  rep = blowup_indicator(both);
  CHECK(rep.concurrent);
  CHECK_FALSE(rep.one_norm_bounded);

  std::vector<DiagnosticsRow> apart{row(0, 1, 1), row(1.5, 11, 2), row(4.5, 5, 15)};
  CHECK_FALSE(blowup_indicator(apart).concurrent);

  CHECK(dyadic_window(4.2) == dyadic_window(5.9));
  CHECK(dyadic_window(1.5) != dyadic_window(4.5));
  CHECK_FALSE(rep.to_text().empty());
}
