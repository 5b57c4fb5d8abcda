#include "polaris/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include "polaris/config.hpp"
#include "polaris/diagnostics.hpp"
#include "polaris/elliptic.hpp"
#include "polaris/steady.hpp"
#include "polaris/stepper.hpp"

namespace polaris {

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    detail << (cond ? "" : "[violated] ") << what << "; ";
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << std::scientific << v;
  return os.str();
}

RunOutcome run_config(const RunConfig& cfg) {
  const auto mesh = cfg.geometry.build();
  const auto init = make_initial_state(cfg, mesh);
  RunOptions opts;
  opts.t_end = cfg.t_end;
  opts.record_every = cfg.diagnostics.cadence;
  opts.p_list = cfg.diagnostics.p_list;
  return run(mesh, cfg.params, cfg.stepper, init, opts);
}

bool norms_finite(const RunOutcome& out) {
  for (const auto& r : out.history)
    for (double v : {r.M, r.L4_V, r.L4_u, r.L2_u, r.max_V, r.max_u})
      if (!std::isfinite(v)) return false;
  return true;
}

double weighted_l2(const Mesh& mesh, const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double w = mesh.cells()[k].measure;
    num += w * (a[k] - b[k]) * (a[k] - b[k]);
    den += w * b[k] * b[k];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

struct MassRuns {
  RunOutcome linear;
  RunOutcome truncated;
};

MassRuns mass_runs() {
  auto cfg = builtin_scenario("mass-disk");
  MassRuns r;
  r.linear = run_config(cfg);
  cfg.params.exchange = ExchangeLaw::truncated(1.0);
  r.truncated = run_config(cfg);
  return r;
}

CriterionResult mass_conservation(const MassRuns& runs) {
  Check c;
  for (const auto* out : {&runs.linear, &runs.truncated}) {
    const char* label = out == &runs.linear ? "linear" : "truncated m=1";
    c.require(out->reason == Termination::ReachedTEnd, std::string(label) + " reached t=5");
    c.require(out->accepted_steps >= 1000,
              std::string(label) + " steps " + std::to_string(out->accepted_steps) + " >= 1000");
    c.require(out->max_mass_drift <= 1e-9,
              std::string(label) + " max rel mass drift " + fmt(out->max_mass_drift) + " <= 1e-9");
  }
  return {1, "mass conservation", c.ok, c.detail.str()};
}

CriterionResult positivity(const MassRuns& runs) {
  Check c;
  for (const auto* out : {&runs.linear, &runs.truncated}) {
    const char* label = out == &runs.linear ? "linear" : "truncated m=1";
    const double m = std::min({out->min_V, out->min_u, out->min_c});
    c.require(m >= -1e-12, std::string(label) + " min(V,u,c) " + fmt(m) + " >= -1e-12");
  }
  return {2, "positivity", c.ok, c.detail.str()};
}

CriterionResult elliptic_reproduction() {
  Check c;
  Parameters p;  // alpha = beta = 1
  const double R = 1.0, u0 = 1.0;
  const double sa = std::sqrt(p.alpha);
  const double c0 = p.beta * u0 / (std::cosh(sa * R) / R - std::sinh(sa * R) / (sa * R * R));
  std::vector<double> errs;
  std::vector<double> hs;
  for (std::size_t n : {16u, 32u, 64u, 128u}) {
    const auto mesh = build_radial_ball_mesh(R, n);
    const std::vector<double> u{u0};
    const auto cs = solve_c(mesh, p, u, 1e-12);
    double err = 0.0, ref = 0.0;
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
      const double r = mesh.cells()[k].r;
      const double exact = c0 * std::sinh(sa * r) / (sa * r);
      err = std::max(err, std::abs(cs[k] - exact));
      ref = std::max(ref, std::abs(exact));
    }
    errs.push_back(err / ref);
    hs.push_back(R / static_cast<double>(n));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double order = std::log(errs[i - 1] / errs[i]) / std::log(hs[i - 1] / hs[i]);
    c.require(errs[i] < errs[i - 1] && order >= 1.8, "order n=" + std::to_string(static_cast<int>(R / hs[i])) +
                                                         " " + fmt(order) + " >= 1.8");
  }
  c.require(errs.back() <= 5e-4, "finest error " + fmt(errs.back()) + " <= 5e-4");
  return {3, "elliptic analytic reproduction", c.ok, c.detail.str()};
}

CriterionResult spherical_cross_check() {
  Check c;
  const Parameters p;
  const std::size_t n = 64;
  const auto closed = spherical_steady_state(p, 1.0, 1.0, n);
  c.require(std::abs(closed.u0 - kSphericalU0DefaultMass1) <= 1e-10 * kSphericalU0DefaultMass1,
            "u0 " + fmt(closed.u0) + " matches pinned oracle");

  auto cfg = builtin_scenario("steady-validate");
  const auto mesh = cfg.geometry.build();
  State init;
  init.V = closed.V;
  init.u = closed.u;
  RunOptions opts;
  opts.t_end = cfg.t_end;
  opts.record_every = 50;
  const auto out = run(mesh, cfg.params, cfg.stepper, init, opts);
  const double drift = weighted_l2(mesh, out.final_state.V, closed.V);
  c.require(out.reason == Termination::ReachedTEnd, "run reached t=10");
  c.require(drift <= 1e-3, "time-dependent drift of V " + fmt(drift) + " <= 1e-3");

  const auto fp = fixed_point_steady(mesh, p, closed.mu);
  const double dv = weighted_l2(mesh, fp.V, closed.V);
  const double dc = weighted_l2(mesh, fp.c, closed.c);
  const double du = std::abs(fp.u[0] - closed.u[0]) / closed.u[0];
  c.require(fp.converged, "fixed point converged in " + std::to_string(fp.iterations) + " iterations");
  c.require(dv <= 1e-3, "fixed-point V rel L2 " + fmt(dv) + " <= 1e-3");
  c.require(dc <= 1e-3, "fixed-point c rel L2 " + fmt(dc) + " <= 1e-3");
  c.require(du <= 1e-3, "fixed-point u rel " + fmt(du) + " <= 1e-3");
  return {4, "spherical steady-state cross-check", c.ok, c.detail.str()};
}

CriterionResult small_data() {
  Check c;
  const auto cfg = builtin_scenario("small-data");
  const auto out = run_config(cfg);
  const double q0 = out.history.front().q_for(2.0);
  double sup = 0.0;
  for (const auto& r : out.history) sup = std::max(sup, r.q_for(2.0));
  const auto rep = blowup_indicator(out.history);
  c.require(std::abs(q0 - 1e-3) <= 1e-12, "Q2(0) = " + fmt(q0));
  c.require(out.reason == Termination::ReachedTEnd, "reached t=20 (" + to_string(out.reason) + ")");
  c.require(sup <= 2.0 * q0, "sup Q2 / Q2(0) = " + fmt(sup / q0) + " <= 2");
  c.require(!rep.V_exceeded && !rep.u_exceeded && !rep.concurrent, "no blow-up flag");
  return {5, "small-data boundedness", c.ok, c.detail.str()};
}

CriterionResult regularized_existence() {
  Check c;
  for (const char* name : {"reg-flux", "reg-source"}) {
    const auto cfg = builtin_scenario(name);
    const auto out = run_config(cfg);
    const double q0 = out.history.front().q_for(2.0);
    c.require(std::abs(q0 - 100.0) <= 1e-9, std::string(name) + " Q2(0) = " + fmt(q0));
    c.require(out.reason == Termination::ReachedTEnd,
              std::string(name) + " " + to_string(out.reason) + " at t=" + fmt(out.final_state.t));
    c.require(norms_finite(out), std::string(name) + " norms finite");
  }
  return {6, "regularized global existence", c.ok, c.detail.str()};
}

CriterionResult steady_mass_identity() {
  Check c;
  const Parameters p;
  const auto mesh = build_disk_mesh(1.0, 16, 32);
  const double ratio = p.k2 / p.k1;
  for (double mu : {1e-3, 1e-2, 1e-1}) {
    const auto s = fixed_point_steady(mesh, p, mu);
    c.require(s.converged, "mu=" + fmt(mu) + " converged");
    if (!s.converged) continue;
    const auto tr = trace(mesh, s.V);
    double lhs = 0.0, surf = 0.0;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      lhs += mesh.surface_nodes()[i].measure * tr[i];
      surf += mesh.surface_nodes()[i].measure * s.u[i];
    }
    const double rel = std::abs(lhs - ratio * surf) / (ratio * surf);
    c.require(rel <= 1e-8, "mu=" + fmt(mu) + " identity rel " + fmt(rel) + " <= 1e-8");
  }
  return {7, "steady-state mass identity", c.ok, c.detail.str()};
}

CriterionResult beta_zero() {
  Check c;
  auto cfg = builtin_scenario("beta-zero");
  const auto mesh = cfg.geometry.build();
  const auto& p = cfg.params;
  State s0;
  s0.V = {1.0};
  s0.u = {0.25};
  const double dt = 0.1;
  const auto res = step(mesh, p, cfg.stepper, s0, dt);
  // closed-form backward Euler of |B| V' = -|Gamma| q, u' = q
  const double B = mesh.cells()[0].measure, G = mesh.surface_nodes()[0].measure;
  const double a11 = 1.0 + dt * G * p.k1 / B, a12 = -dt * G * p.k2 / B;
  const double a21 = -dt * p.k1, a22 = 1.0 + dt * p.k2;
  const double det = a11 * a22 - a12 * a21;
  const double V1 = (a22 * s0.V[0] - a12 * s0.u[0]) / det;
  const double u1 = (a11 * s0.u[0] - a21 * s0.V[0]) / det;
  const double e = std::max(std::abs(res.state.V[0] - V1), std::abs(res.state.u[0] - u1));
  c.require(e <= 1e-12, "one-step deviation from 2x2 backward Euler " + fmt(e) + " <= 1e-12");

  const auto out = run_config(cfg);
  const auto& fs = out.final_state;
  const double gap = std::abs(p.k1 * fs.V[0] - p.k2 * fs.u[0]) / std::max(p.k1 * fs.V[0], p.k2 * fs.u[0]);
  c.require(out.reason == Termination::ReachedTEnd, "long run reached t_end");
  c.require(gap <= 1e-8, "relative |k1 V - k2 u| at t=20: " + fmt(gap) + " <= 1e-8");
  return {8, "beta=0 decoupled relaxation", c.ok, c.detail.str()};
}

CriterionResult blowup_monitor() {
  Check c;
  auto synth = [](double t, double v, double u) {
    DiagnosticsRow r;
    r.t = t;
    r.L4_V = v;
    r.L4_u = u;
    r.p_values = {4.0};
    r.Q = {v * v * v * v + u * u * u * u};
    return r;
  };
  {
    std::vector<DiagnosticsRow> h{synth(0, 1, 1), synth(1, 1, 1), synth(2, 1, 1)};
    const auto rep = blowup_indicator(h);
    c.require(!rep.V_exceeded && !rep.u_exceeded && !rep.concurrent && rep.growth_L4_V == 1.0 &&
                  rep.growth_L4_u == 1.0,
              "constant history: no flags, growth 1");
  }
  {
    std::vector<DiagnosticsRow> h{synth(0, 1, 1), synth(1.5, 20, 1), synth(3, 30, 2)};
    const auto rep = blowup_indicator(h);
    c.require(rep.V_exceeded && !rep.u_exceeded && !rep.concurrent, "V-only growth: concurrency false");
  }
  {
    std::vector<DiagnosticsRow> h{synth(0, 1, 1), synth(2.5, 11, 12), synth(3.5, 20, 30)};
    const auto rep = blowup_indicator(h);
    c.require(rep.concurrent, "joint growth in window [2,4): concurrency true");
  }
  {
    // both exceed, but in different dyadic windows
    std::vector<DiagnosticsRow> h{synth(0, 1, 1), synth(1.5, 11, 1), synth(5, 1, 12)};
    const auto rep = blowup_indicator(h);
    c.require(!rep.concurrent && rep.V_exceeded && rep.u_exceeded, "separate windows: concurrency false");
  }
  try {
    const auto out = run_config(builtin_scenario("large-data"));
    const auto rep = blowup_indicator(out.history);
    c.require(!rep.to_text().empty(), "large-data report emitted (" + to_string(out.reason) +
                                          ", growth V " + fmt(rep.growth_L4_V) + ", u " +
                                          fmt(rep.growth_L4_u) + ")");
  } catch (const std::exception& e) {
    c.require(false, std::string("large-data run threw: ") + e.what());
  }
  return {9, "blow-up monitor consistency", c.ok, c.detail.str()};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream* log) {
  std::vector<CriterionResult> results;
  auto emit = [&](CriterionResult r) {
    if (log) *log << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << std::endl;
    results.push_back(std::move(r));
  };
  auto guarded = [&](int id, const char* name, const std::function<CriterionResult()>& fn) {
    try {
      emit(fn());
    } catch (const std::exception& e) {
      emit({id, name, false, std::string("exception: ") + e.what()});
    }
  };
  MassRuns runs;
  bool have_runs = false;
  try {
    runs = mass_runs();
    have_runs = true;
  } catch (const std::exception& e) {
    emit({1, "mass conservation", false, std::string("exception: ") + e.what()});
    emit({2, "positivity", false, std::string("exception: ") + e.what()});
  }
  if (have_runs) {
    emit(mass_conservation(runs));
    emit(positivity(runs));
  }
  guarded(3, "elliptic analytic reproduction", elliptic_reproduction);
  guarded(4, "spherical steady-state cross-check", spherical_cross_check);
  guarded(5, "small-data boundedness", small_data);
  guarded(6, "regularized global existence", regularized_existence);
  guarded(7, "steady-state mass identity", steady_mass_identity);
  guarded(8, "beta=0 decoupled relaxation", beta_zero);
  guarded(9, "blow-up monitor consistency", blowup_monitor);
  return results;
}

}  // namespace polaris
