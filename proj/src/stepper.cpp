#include "polaris/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "assembly.hpp"
#include "polaris/elliptic.hpp"
#include "polaris/errors.hpp"

namespace polaris {

double bernoulli(double x) {
  if (std::abs(x) < 1e-5) return 1.0 - 0.5 * x + x * x / 12.0;
  return x / std::expm1(x);
}

double sg_face_flux(double D, double c_K, double c_L, double V_K, double V_L, double measure,
                    double distance) {
  if (!(distance > 0.0)) throw ContractError("sg_face_flux: distance must be positive");
  const double P = (c_L - c_K) / D;
  return measure * D / distance * (bernoulli(-P) * V_K - bernoulli(P) * V_L);
}

void StepperConfig::validate() const {
  if (!(dt_min > 0.0) || !(dt_min <= dt_init) || !(dt_init <= dt_max))
    throw ConfigError("stepper: require 0 < dt_min <= dt_init <= dt_max");
  if (!(grow >= 1.0)) throw ConfigError("stepper: grow factor must be at least 1");
  if (!(shrink > 0.0 && shrink < 1.0)) throw ConfigError("stepper: shrink factor must lie in (0,1)");
  if (!(linear_tol > 0.0)) throw ConfigError("stepper: linear tolerance must be positive");
  if (!(blowup_factor > 0.0)) throw ConfigError("stepper: blow-up threshold must be positive");
  if (!(max_relative_change > 0.0))
    throw ConfigError("stepper: max relative change must be positive");
  if (max_steps == 0) throw ConfigError("stepper: max_steps must be positive");
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::ReachedTEnd:
      return "reached_t_end";
    case Termination::BlowupSuspected:
      return "blowup_suspected";
    case Termination::SolverFailure:
      return "solver_failure";
  }
  return "unknown";
}

Stepper::Stepper(const Mesh& mesh, const Parameters& params, const StepperConfig& config)
    : mesh_(mesh), params_(params), config_(config), helmholtz_(assemble_helmholtz(mesh, params.alpha)) {
  params_.validate();
  config_.validate();
}

State Stepper::prepare(State state) const {
  state.validate(mesh_);
  state.c = finalize_c(state.u, state.c);
  return state;
}

std::vector<double> Stepper::finalize_c(const std::vector<double>& u,
                                        const std::vector<double>& guess) const {
  return solve_c(helmholtz_, mesh_, params_, u, config_.linear_tol, guess);
}

double Stepper::explicit_dt_limit() const {
  if (params_.exchange.kind == ExchangeLaw::Kind::Linear)
    return std::numeric_limits<double>::infinity();
  double ratio = 0.0;
  const auto& nbf = mesh_.boundary_faces_per_cell();
  for (const auto& f : mesh_.boundary_faces())
    ratio = std::max(ratio, f.measure * static_cast<double>(nbf[f.cell]) / mesh_.cells()[f.cell].measure);
  return 1.0 / (params_.k2 + params_.k1 * ratio);
}

void Stepper::add_sg_block(std::vector<Triplet>& trip, const std::vector<double>& c) const {
  detail::add_sg_triplets(mesh_, params_.D, c, trip);
}

void Stepper::sg_fluxes(const std::vector<double>& c, const std::vector<double>& V,
                        std::vector<double>& net_out) const {
  for (const auto& f : mesh_.interior_faces()) {
    const double F =
        sg_face_flux(params_.D, c[f.inner], c[f.outer], V[f.inner], V[f.outer], f.measure, f.distance);
    net_out[f.inner] += F;
    net_out[f.outer] -= F;
  }
}

void Stepper::surface_fluxes(const std::vector<double>& u, std::vector<double>& net_in) const {
  for (const auto& e : mesh_.surface_edges()) {
    const double F = params_.d * e.weight * (u[e.b] - u[e.a]);
    net_in[e.a] += F;
    net_in[e.b] -= F;
  }
}

namespace {

void require_finite(const std::vector<double>& f, const char* name) {
  for (double v : f)
    if (!std::isfinite(v))
      throw SolverError(std::string("step: non-finite value in ") + name, {});
}

}  // namespace

StepResult Stepper::step_linear(const State& s, double dt) const {
  const std::size_t nc = mesh_.num_cells();
  const std::size_t nn = mesh_.num_nodes();
  const auto& cells = mesh_.cells();
  const auto& nodes = mesh_.surface_nodes();
  const double k1 = params_.k1, k2 = params_.k2, d = params_.d;

  std::vector<Triplet> trip;
  trip.reserve(nc + 4 * mesh_.interior_faces().size() + 4 * nn + 4 * mesh_.surface_edges().size());
  std::vector<double> rhs(nc + nn);
  for (std::size_t k = 0; k < nc; ++k) {
    trip.push_back({k, k, cells[k].measure / dt});
    rhs[k] = cells[k].measure / dt * s.V[k];
  }
  add_sg_block(trip, s.c);
  for (const auto& f : mesh_.boundary_faces()) {
    const std::size_t i = nc + f.node;
    trip.push_back({f.cell, f.cell, f.measure * k1});
    trip.push_back({f.cell, i, -f.measure * k2});
    trip.push_back({i, i, f.measure * k2});
    trip.push_back({i, f.cell, -f.measure * k1});
  }
  for (std::size_t n = 0; n < nn; ++n) {
    trip.push_back({nc + n, nc + n, nodes[n].measure / dt});
    rhs[nc + n] = nodes[n].measure / dt * s.u[n];
  }
  detail::add_surface_laplacian_triplets(mesh_, d, nc, trip);
  const SparseOperator A(nc + nn, std::move(trip), false);
  std::vector<double> guess(s.V);
  guess.insert(guess.end(), s.u.begin(), s.u.end());
  const auto x = solve_or_throw(A, rhs, std::move(guess), {config_.linear_tol, 20000}, "step");

  const std::vector<double> Vs(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nc));
  const std::vector<double> us(x.begin() + static_cast<std::ptrdiff_t>(nc), x.end());

  // Conservative update from the solved iterate: every face flux and every
  // exchange transfer is added to one side and subtracted from the other.
  std::vector<double> out_V(nc, 0.0), in_u(nn, 0.0);
  sg_fluxes(s.c, Vs, out_V);
  surface_fluxes(us, in_u);
  for (const auto& f : mesh_.boundary_faces()) {
    const double transfer = f.measure * (k1 * Vs[f.cell] - k2 * us[f.node]);
    out_V[f.cell] += transfer;
    in_u[f.node] += transfer;
  }
  StepResult res;
  res.state.t = s.t + dt;
  res.state.V.resize(nc);
  res.state.u.resize(nn);
  for (std::size_t k = 0; k < nc; ++k) res.state.V[k] = s.V[k] - dt * out_V[k] / cells[k].measure;
  for (std::size_t n = 0; n < nn; ++n) res.state.u[n] = s.u[n] + dt * in_u[n] / nodes[n].measure;
  require_finite(res.state.V, "V");
  require_finite(res.state.u, "u");
  res.state.c = finalize_c(res.state.u, s.c);
  return res;
}

StepResult Stepper::step_truncated(const State& s, double dt) const {
  const std::size_t nc = mesh_.num_cells();
  const std::size_t nn = mesh_.num_nodes();
  const auto& cells = mesh_.cells();
  const auto& nodes = mesh_.surface_nodes();
  const auto& nbf = mesh_.boundary_faces_per_cell();

  StepResult res;
  // explicit transfer rate per unit surface measure, capped so neither side
  // can be driven below zero
  std::vector<double> Q(nn, 0.0);
  for (const auto& f : mesh_.boundary_faces()) {
    double q = params_.exchange.apply(params_.k1 * s.V[f.cell] - params_.k2 * s.u[f.node]);
    const double attach_cap =
        cells[f.cell].measure * s.V[f.cell] / (dt * f.measure * static_cast<double>(nbf[f.cell]));
    const double detach_cap = -s.u[f.node] / dt;
    if (q > attach_cap) {
      q = attach_cap;
      ++res.limiter_activations;
    } else if (q < detach_cap) {
      q = detach_cap;
      ++res.limiter_activations;
    }
    Q[f.node] = q;
  }

  // u: implicit surface diffusion with fixed exchange
  std::vector<Triplet> ut;
  std::vector<double> urhs(nn);
  for (std::size_t n = 0; n < nn; ++n) {
    ut.push_back({n, n, nodes[n].measure / dt});
    urhs[n] = nodes[n].measure * (s.u[n] / dt + Q[n]);
  }
  detail::add_surface_laplacian_triplets(mesh_, params_.d, 0, ut);
  const SparseOperator Au(nn, std::move(ut), true);
  const auto us = solve_or_throw(Au, urhs, s.u, {config_.linear_tol, 20000}, "step (u)");

  // V: implicit drift-diffusion with the same exchange as prescribed flux
  std::vector<Triplet> vt;
  std::vector<double> vrhs(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    vt.push_back({k, k, cells[k].measure / dt});
    vrhs[k] = cells[k].measure / dt * s.V[k];
  }
  for (const auto& f : mesh_.boundary_faces()) vrhs[f.cell] -= f.measure * Q[f.node];
  add_sg_block(vt, s.c);
  const SparseOperator Av(nc, std::move(vt), false);
  const auto Vs = solve_or_throw(Av, vrhs, s.V, {config_.linear_tol, 20000}, "step (V)");

  std::vector<double> out_V(nc, 0.0), in_u(nn, 0.0);
  sg_fluxes(s.c, Vs, out_V);
  surface_fluxes(us, in_u);
  for (const auto& f : mesh_.boundary_faces()) {
    const double transfer = f.measure * Q[f.node];
    out_V[f.cell] += transfer;
    in_u[f.node] += transfer;
  }
  res.state.t = s.t + dt;
  res.state.V.resize(nc);
  res.state.u.resize(nn);
  for (std::size_t k = 0; k < nc; ++k) res.state.V[k] = s.V[k] - dt * out_V[k] / cells[k].measure;
  for (std::size_t n = 0; n < nn; ++n) res.state.u[n] = s.u[n] + dt * in_u[n] / nodes[n].measure;
  require_finite(res.state.V, "V");
  require_finite(res.state.u, "u");
  res.state.c = finalize_c(res.state.u, s.c);
  return res;
}

StepResult Stepper::step(const State& state, double dt) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractError("step: dt must be positive");
  state.validate(mesh_);
  if (state.c.size() != mesh_.num_cells()) return step(prepare(state), dt);
  return params_.exchange.kind == ExchangeLaw::Kind::Linear ? step_linear(state, dt)
                                                             : step_truncated(state, dt);
}

StepResult step(const Mesh& mesh, const Parameters& params, const StepperConfig& config,
                const State& state, double dt) {
  return Stepper(mesh, params, config).step(state, dt);
}

namespace {

double max_abs(const std::vector<double>& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

double min_of(const std::vector<double>& f) {
  return f.empty() ? 0.0 : *std::min_element(f.begin(), f.end());
}

double relative_change(const State& a, const State& b) {
  const double scale = std::max({max_abs(a.V), max_abs(a.u), max_abs(b.V), max_abs(b.u)});
  if (scale == 0.0) return 0.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < a.V.size(); ++i) diff = std::max(diff, std::abs(a.V[i] - b.V[i]));
  for (std::size_t i = 0; i < a.u.size(); ++i) diff = std::max(diff, std::abs(a.u[i] - b.u[i]));
  return diff / scale;
}

}  // namespace

RunOutcome run(const Mesh& mesh, const Parameters& params, const StepperConfig& config,
               const State& initial, const RunOptions& options) {
  if (!(options.t_end >= initial.t)) throw ContractError("run: t_end precedes the initial time");
  if (!initial.nonnegative()) throw ContractError("run: initial data must be nonnegative");
  const Stepper stepper(mesh, params, config);
  const std::size_t every = std::max<std::size_t>(1, options.record_every);

  RunOutcome out;
  State state = stepper.prepare(initial);
  out.min_V = min_of(state.V);
  out.min_u = min_of(state.u);
  out.min_c = min_of(state.c);
  const double M0 = total_mass(mesh, state);
  const double norm0 = std::max(max_abs(state.V), max_abs(state.u));

  auto record = [&](double dt) {
    auto row = compute_row(mesh, params, state, dt, options.p_list, out.limiter_activations);
    if (options.sink) options.sink(row, state);
    out.history.push_back(std::move(row));
  };
  record(0.0);

  const double dt_cap = std::min(config.dt_max, stepper.explicit_dt_limit());
  const double dt_floor = std::min(config.dt_min, dt_cap);
  double dt = std::min(config.dt_init, dt_cap);
  std::size_t pinned = 0;
  double last_dt = 0.0;
  bool last_recorded = true;

  while (state.t < options.t_end) {
    if (out.accepted_steps >= config.max_steps) {
      out.reason = Termination::SolverFailure;
      out.message = "step budget exhausted";
      break;
    }
    const double remaining = options.t_end - state.t;
    const bool final_step = dt >= remaining;
    const double h = final_step ? remaining : dt;
    const bool at_floor = h <= dt_floor * (1.0 + 1e-12) && !final_step;

    StepResult res;
    try {
      res = stepper.step(state, h);
    } catch (const SolverError& e) {
      if (dt <= dt_floor * (1.0 + 1e-12)) {
        out.reason = Termination::SolverFailure;
        out.message = e.what();
        break;
      }
      ++out.rejected_steps;
      dt = std::max(dt * config.shrink, dt_floor);
      continue;
    }

    const double change = relative_change(state, res.state);
    bool forced = false;
    if (change > config.max_relative_change) {
      if (!at_floor && h > dt_floor * (1.0 + 1e-12)) {
        ++out.rejected_steps;
        dt = std::max(h * config.shrink, dt_floor);
        continue;
      }
      forced = true;
    }
    pinned = forced ? pinned + 1 : 0;

    state = std::move(res.state);
    if (final_step) state.t = options.t_end;
    ++out.accepted_steps;
    out.limiter_activations += res.limiter_activations;
    last_dt = h;
    out.min_V = std::min(out.min_V, min_of(state.V));
    out.min_u = std::min(out.min_u, min_of(state.u));
    out.min_c = std::min(out.min_c, min_of(state.c));
    if (M0 > 0.0)
      out.max_mass_drift = std::max(out.max_mass_drift, std::abs(total_mass(mesh, state) - M0) / M0);

    last_recorded = false;
    if (out.accepted_steps % every == 0) {
      record(h);
      last_recorded = true;
    }

    const double norm = std::max(max_abs(state.V), max_abs(state.u));
    if ((norm0 > 0.0 && norm >= config.blowup_factor * norm0) || pinned >= config.pinned_limit) {
      out.reason = Termination::BlowupSuspected;
      out.message = pinned >= config.pinned_limit
                        ? "time step pinned at dt_min (heuristic blow-up detector)"
                        : "max-norm exceeded threshold (heuristic blow-up detector)";
      break;
    }
    if (!forced && !final_step) dt = std::min(h * config.grow, dt_cap);
  }
  if (!last_recorded) record(last_dt);
  out.final_state = std::move(state);
  return out;
}

}  // namespace polaris
