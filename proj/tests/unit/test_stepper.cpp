#include <doctest.h>

#include <cmath>

#include "polaris/diagnostics.hpp"
#include "polaris/stepper.hpp"

using namespace polaris;

TEST_CASE("Bernoulli function") {
  CHECK(bernoulli(0.0) == 1.0);
  CHECK(bernoulli(1e-7) == doctest::Approx(1.0 - 0.5e-7).epsilon(1e-15));
  CHECK(bernoulli(2.0) == doctest::Approx(2.0 / std::expm1(2.0)).epsilon(1e-15));
  CHECK(bernoulli(-3.0) - bernoulli(3.0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("Scharfetter-Gummel flux limits") {
  CHECK(sg_face_flux(0.7, 2.0, 2.0, 3.0, 1.0, 0.5, 0.25) == doctest::Approx(0.5 * 0.7 / 0.25 * 2.0));
  // advection limit with equal densities: tau * Vbar * (c_L - c_K), first order in P
  const double D = 1.0, Vbar = 2.0, tau = 0.3 / 0.1;
  for (double dc : {1e-2, 1e-3, 1e-4}) {
    const double F = sg_face_flux(D, 0.0, dc, Vbar, Vbar, 0.3, 0.1);
    CHECK(std::abs(F - tau * Vbar * dc) <= tau * Vbar * dc * dc);
  }
  CHECK(sg_face_flux(1.0, 0.4, 0.9, std::exp(0.4), std::exp(0.9), 1.0, 1.0) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("zero state stays zero") {
  const auto mesh = build_disk_mesh(1.0, 4, 8);
  State s{0.0, std::vector<double>(32, 0.0), std::vector<double>(8, 0.0), {}};
  for (const auto& law : {ExchangeLaw::linear(), ExchangeLaw::truncated(1.0)}) {
    Parameters p;
    p.exchange = law;
    const auto r = step(mesh, p, StepperConfig{}, s, 1e-2);
    for (double v : r.state.V) CHECK(v == 0.0);
    for (double v : r.state.u) CHECK(v == 0.0);
    for (double v : r.state.c) CHECK(v == 0.0);
    CHECK(r.state.t == doctest::Approx(1e-2));
  }
}

TEST_CASE("constant equilibrium without source is a fixed point") {
  Parameters p;
  p.beta = 0.0;
  p.k1 = 2.0;
  p.k2 = 3.0;
  const double u0 = 0.8;
  for (const auto& mesh : {build_disk_mesh(1.0, 4, 8), build_radial_ball_mesh(1.0, 6)}) {
    State s{0.0, std::vector<double>(mesh.num_cells(), p.k2 / p.k1 * u0), std::vector<double>(mesh.num_nodes(), u0), {}};
    auto r = step(mesh, p, StepperConfig{}, s, 0.05);
    for (double v : r.state.V) CHECK(v == doctest::Approx(p.k2 / p.k1 * u0).epsilon(1e-12));
    for (double v : r.state.u) CHECK(v == doctest::Approx(u0).epsilon(1e-12));
  }
}

TEST_CASE("run with t_end equal to the start time returns the initial state") {
  const auto mesh = build_radial_ball_mesh(1.0, 4);
  State s{0.0, {1, 2, 3, 4}, {0.5}, {}};
  RunOptions opt;
  opt.t_end = 0.0;
  const auto out = run(mesh, Parameters{}, StepperConfig{}, s, opt);
  CHECK(out.reason == Termination::ReachedTEnd);
  CHECK(out.final_state.V == s.V);
  CHECK(out.final_state.u == s.u);
  CHECK(out.accepted_steps == 0);
  CHECK(out.history.size() == 1);
}

TEST_CASE("rotational symmetry is preserved on the disk") {
  const auto mesh = build_disk_mesh(1.0, 6, 12);
  State s;
  for (const auto& cell : mesh.cells()) s.V.push_back(1.0 + cell.r * cell.r);
  s.u.assign(mesh.num_nodes(), 0.3);
  StepperConfig cfg;
  cfg.dt_max = 0.05;
  RunOptions opt;
  opt.t_end = 1.0;
  double worst = 0.0;
  opt.sink = [&](const DiagnosticsRow&, const State& st) {
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t k = 1; k < 12; ++k)
        worst = std::max(worst, std::abs(st.V[mesh.cell_index(j, k)] - st.V[mesh.cell_index(j, 0)]));
    for (double u : st.u) worst = std::max(worst, std::abs(u - st.u[0]));
  };
  const auto out = run(mesh, Parameters{}, cfg, s, opt);
  CHECK(out.reason == Termination::ReachedTEnd);
  CHECK(worst <= 1e-10);
}

TEST_CASE("first-order temporal convergence") {
  const auto mesh = build_radial_ball_mesh(1.0, 8);
  Parameters p;
  State s0;
  for (const auto& cell : mesh.cells()) s0.V.push_back(0.5 + cell.r);
  s0.u = {0.2};
  const double T = 0.2;
  auto integrate = [&](std::size_t steps) {
    Stepper st(mesh, p, StepperConfig{});
    State s = st.prepare(s0);
    for (std::size_t i = 0; i < steps; ++i) s = st.step(s, T / steps).state;
    return s;
  };
  const auto ref = integrate(2560);
  auto err = [&](const State& s) {
    double e = std::abs(s.u[0] - ref.u[0]);
    for (std::size_t i = 0; i < s.V.size(); ++i) e = std::max(e, std::abs(s.V[i] - ref.V[i]));
    return e;
  };
  double prev = err(integrate(10));
  for (std::size_t n : {20u, 40u, 80u}) {
    const double e = err(integrate(n));
    CHECK(std::log2(prev / e) >= 0.9);
    prev = e;
  }
}

TEST_CASE("decoupled relaxation has a positive exponential rate") {
  const auto mesh = build_radial_ball_mesh(1.0, 1);
  Parameters p;
  p.beta = 0.0;
  State s{0.0, {1.0}, {0.0}, {}};
  StepperConfig cfg;
  cfg.dt_max = 0.05;
  RunOptions opt;
  opt.t_end = 5.0;
  const auto out = run(mesh, p, cfg, s, opt);
  REQUIRE(out.reason == Termination::ReachedTEnd);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& row : out.history) {
    const double gap = std::abs(p.k1 * row.max_V - p.k2 * row.max_u);
    if (gap <= 1e-13 || row.t < 0.5) continue;
    const double y = std::log(gap);
    sx += row.t; sy += y; sxx += row.t * row.t; sxy += row.t * y;
    ++n;
  }
  REQUIRE(n > 2);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(-slope > 0.0);
  for (double c : out.final_state.c) CHECK(c == 0.0);
}

TEST_CASE("truncated exchange limits dt and keeps mass") {
  const auto mesh = build_disk_mesh(1.0, 4, 16);
  Parameters p;
  p.exchange = ExchangeLaw::truncated(1.0);
  Stepper st(mesh, p, StepperConfig{});
  CHECK(std::isfinite(st.explicit_dt_limit()));
  CHECK(Stepper(mesh, Parameters{}, StepperConfig{}).explicit_dt_limit() == INFINITY);

  State s{0.0, std::vector<double>(mesh.num_cells(), 5.0), std::vector<double>(16, 0.0), {}};
  s = st.prepare(s);
  const double m0 = total_mass(mesh, s);
  for (int i = 0; i < 20; ++i) s = st.step(s, 0.5 * st.explicit_dt_limit()).state;
  CHECK(std::abs(total_mass(mesh, s) - m0) <= 1e-12 * m0);
  CHECK(s.nonnegative());
}

TEST_CASE("stepper config validation") {
  StepperConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt_min = 1.0;
  CHECK_THROWS(c.validate());
}
