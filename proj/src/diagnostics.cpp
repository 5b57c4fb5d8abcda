#include "polaris/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "polaris/errors.hpp"

namespace polaris {

double DiagnosticsRow::q_for(double p) const {
  for (std::size_t i = 0; i < p_values.size(); ++i)
    if (p_values[i] == p) return Q[i];
  return std::numeric_limits<double>::quiet_NaN();
}

double total_mass(const Mesh& mesh, const State& state) {
  state.validate(mesh);
  double bulk = 0.0;
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) bulk += mesh.cells()[k].measure * state.V[k];
  double surf = 0.0;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
    surf += mesh.surface_nodes()[i].measure * state.u[i];
  return bulk + surf;
}

namespace {

double power_sum(const Mesh& mesh, std::span<const double> f, Domain domain, double p) {
  double s = 0.0;
  if (domain == Domain::Bulk) {
    if (f.size() != mesh.num_cells()) throw ContractError("bulk field length mismatch");
    for (std::size_t k = 0; k < f.size(); ++k)
      s += mesh.cells()[k].measure * std::pow(std::abs(f[k]), p);
  } else {
    if (f.size() != mesh.num_nodes()) throw ContractError("surface field length mismatch");
    for (std::size_t i = 0; i < f.size(); ++i)
      s += mesh.surface_nodes()[i].measure * std::pow(std::abs(f[i]), p);
  }
  return s;
}

}  // namespace

double lp_norm(const Mesh& mesh, std::span<const double> field, Domain domain, double p) {
  if (!(p >= 1.0)) throw ContractError("lp_norm: p must be at least 1");
  return std::pow(power_sum(mesh, field, domain, p), 1.0 / p);
}

double q_p(const Mesh& mesh, const Parameters& params, const State& state, double p) {
  if (!(p > 1.0)) throw ContractError("q_p: p must exceed 1, got " + std::to_string(p));
  state.validate(mesh);
  const double c1 = std::pow(params.k2 / params.k1, p - 1.0);
  double q = power_sum(mesh, state.V, Domain::Bulk, p) +
             c1 * power_sum(mesh, state.u, Domain::Surface, p);
  if (p < 2.0) q += power_sum(mesh, state.u, Domain::Surface, 2.0);
  return q;
}

DiagnosticsRow compute_row(const Mesh& mesh, const Parameters& params, const State& state,
                           double dt, std::vector<double> p_list, std::size_t limiter_count) {
  std::sort(p_list.begin(), p_list.end());
  DiagnosticsRow row;
  row.t = state.t;
  row.dt = dt;
  row.M = total_mass(mesh, state);
  row.p_values = p_list;
  for (double p : p_list) row.Q.push_back(q_p(mesh, params, state, p));
  row.L4_V = lp_norm(mesh, state.V, Domain::Bulk, 4.0);
  row.L4_u = lp_norm(mesh, state.u, Domain::Surface, 4.0);
  row.L2_u = lp_norm(mesh, state.u, Domain::Surface, 2.0);
  const auto [vmin, vmax] = std::minmax_element(state.V.begin(), state.V.end());
  const auto [umin, umax] = std::minmax_element(state.u.begin(), state.u.end());
  row.min_V = *vmin;
  row.max_V = *vmax;
  row.min_u = *umin;
  row.max_u = *umax;
  const auto tr = trace(mesh, state.V);
  row.trace_L1_V = lp_norm(mesh, tr, Domain::Surface, 1.0);
  row.limiter_count = limiter_count;
  return row;
}

long dyadic_window(double t) {
  if (!(t > 0.0)) return std::numeric_limits<long>::min();
  return static_cast<long>(std::floor(std::log2(t)));
}

BlowupReport blowup_indicator(std::span<const DiagnosticsRow> history, double growth_threshold) {
  if (history.empty()) throw ContractError("blowup_indicator: empty history");
  BlowupReport rep;
  rep.growth_threshold = growth_threshold;

  auto growth = [](double value, double initial) {
    if (initial > 0.0) return value / initial;
    return value > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  };
  const double v0 = history.front().L4_V;
  const double u0 = history.front().L4_u;
  std::map<long, std::pair<bool, bool>> windows;
  for (const auto& row : history) {
    const double gv = growth(row.L4_V, v0);
    const double gu = growth(row.L4_u, u0);
    rep.growth_L4_V = std::max(rep.growth_L4_V, gv);
    rep.growth_L4_u = std::max(rep.growth_L4_u, gu);
    auto& w = windows[dyadic_window(row.t)];
    if (gv > growth_threshold) {
      rep.V_exceeded = true;
      w.first = true;
    }
    if (gu > growth_threshold) {
      rep.u_exceeded = true;
      w.second = true;
    }
  }
  for (const auto& [idx, flags] : windows)
    if (flags.first && flags.second) rep.concurrent = true;
  rep.one_norm_bounded = !(rep.V_exceeded && rep.u_exceeded);

  // log-linear fit of Q_4
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t n = 0;
  for (const auto& row : history) {
    const double q4 = row.q_for(4.0);
    if (!(q4 > 0.0) || !std::isfinite(q4)) continue;
    const double y = std::log(q4);
    st += row.t;
    sy += y;
    stt += row.t * row.t;
    sty += row.t * y;
    ++n;
  }
  const double denom = static_cast<double>(n) * stt - st * st;
  rep.q4_log_rate = (n >= 2 && denom > 0.0) ? (static_cast<double>(n) * sty - st * sy) / denom
                                            : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

std::string BlowupReport::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "# heuristic blow-up monitor (suspicion only, not a verdict)\n"
     << "growth_threshold = " << growth_threshold << '\n'
     << "growth_L4_V = " << growth_L4_V << '\n'
     << "growth_L4_u = " << growth_L4_u << '\n'
     << "V_exceeded = " << (V_exceeded ? "true" : "false") << '\n'
     << "u_exceeded = " << (u_exceeded ? "true" : "false") << '\n'
     << "concurrent = " << (concurrent ? "true" : "false") << '\n'
     << "one_norm_bounded = " << (one_norm_bounded ? "true" : "false") << '\n'
     << "q4_log_rate = " << q4_log_rate << '\n';
  return os.str();
}

}  // namespace polaris
