#include "polaris/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "assembly.hpp"
#include "polaris/elliptic.hpp"
#include "polaris/errors.hpp"
#include "polaris/sparse.hpp"

namespace polaris {

namespace {

constexpr double kPi = std::numbers::pi;

/// sinh(s r)/(s r), 1 at r = 0.
double radial_shape(double sa, double r) {
  const double x = sa * r;
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0 + x * x * x * x / 120.0;
  return std::sinh(x) / x;
}

double neumann_denominator(double sa, double R) {
  return std::cosh(sa * R) / R - std::sinh(sa * R) / (sa * R * R);
}

std::size_t simpson_panels(std::size_t n) {
  std::size_t panels = std::max<std::size_t>(4 * n, 4096);
  return panels + (panels % 2);
}

}  // namespace

SphericalProfile spherical_profile(const Parameters& params, double R, double u0) {
  params.validate();
  if (!(R > 0.0)) throw ConfigError("spherical profile: radius must be positive");
  const double sa = std::sqrt(params.alpha);
  const double c0 = params.source.apply(params.beta, u0) / neumann_denominator(sa, R);
  return {R, u0, c0, params};
}

double SphericalProfile::c(double r) const {
  return c0 * radial_shape(std::sqrt(params.alpha), r);
}

double SphericalProfile::V(double r) const {
  return params.k2 / params.k1 * u0 * std::exp((c(r) - c(R)) / params.D);
}

double spherical_total_mass(const Parameters& params, double R, double u0, std::size_t panels) {
  if (panels < 2 || panels % 2 != 0) throw ContractError("Simpson panel count must be even");
  const auto prof = spherical_profile(params, R, u0);
  const double cR = prof.c(R);
  auto f = [&](double r) { return r * r * std::exp((prof.c(r) - cR) / params.D); };
  const double h = R / static_cast<double>(panels);
  double s = f(0.0) + f(R);
  for (std::size_t i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(h * static_cast<double>(i));
  const double integral = s * h / 3.0;
  return 4.0 * kPi * R * R * u0 + 4.0 * kPi * params.k2 / params.k1 * u0 * integral;
}

std::vector<double> spherical_steady_roots(const Parameters& params, double R, double M_total,
                                           std::size_t n) {
  if (!(M_total >= 0.0) || !std::isfinite(M_total))
    throw ConfigError("spherical steady state: total mass must be nonnegative");
  if (M_total == 0.0) return {0.0};
  const std::size_t panels = simpson_panels(n);
  auto excess = [&](double u0) {
    const double m = spherical_total_mass(params, R, u0, panels);
    if (!std::isfinite(m))
      throw SolverError("spherical steady state: total-mass map is not finite at u0 = " +
                            std::to_string(u0),
                        {});
    return m - M_total;
  };

  // M(u0) >= 4 pi R^2 u0, so the bracket closes no later than M_total / (4 pi R^2)
  double hi = M_total / (4.0 * kPi * R * R) / 1024.0;
  int expansions = 0;
  while (excess(hi) < 0.0) {
    hi *= 2.0;
    if (++expansions > 200) throw SolverError("spherical steady state: bracket expansion failed", {});
  }

  constexpr std::size_t kScan = 256;
  std::vector<double> roots;
  double a = 0.0, fa = -M_total;
  for (std::size_t i = 1; i <= kScan; ++i) {
    const double b = hi * static_cast<double>(i) / static_cast<double>(kScan);
    const double fb = excess(b);
    if (fb == 0.0) {
      roots.push_back(b);
    } else if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      double lo = a, up = b, flo = fa;
      for (int it = 0; it < 200 && (up - lo) > 1e-12 * up; ++it) {
        const double mid = 0.5 * (lo + up);
        const double fm = excess(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          up = mid;
        }
      }
      roots.push_back(0.5 * (lo + up));
    }
    a = b;
    fa = fb;
  }
  if (roots.empty()) throw SolverError("spherical steady state: no crossing found", {});
  return roots;
}

SteadyState spherical_steady_state(const Parameters& params, double R, double M_total,
                                   std::size_t n) {
  const auto mesh = build_radial_ball_mesh(R, n);
  const double u0 = spherical_steady_roots(params, R, M_total, n).front();
  const auto prof = spherical_profile(params, R, u0);
  SteadyState s;
  s.u0 = u0;
  s.u = {u0};
  s.V.resize(mesh.num_cells());
  s.c.resize(mesh.num_cells());
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    s.c[k] = prof.c(mesh.cells()[k].r);
    s.V[k] = prof.V(mesh.cells()[k].r);
  }
  s.mu = mesh.surface_nodes()[0].measure * u0;
  s.total_mass = M_total;
  s.residual = steady_residuals(mesh, params, s.V, s.c, s.u);
  return s;
}

std::vector<double> solve_stationary_V(const Mesh& mesh, const Parameters& params,
                                       std::span<const double> c, std::span<const double> u,
                                       double tol) {
  if (c.size() != mesh.num_cells() || u.size() != mesh.num_nodes())
    throw ContractError("solve_stationary_V: field length mismatch");
  std::vector<Triplet> trip;
  std::vector<double> b(mesh.num_cells(), 0.0);
  detail::add_sg_triplets(mesh, params.D, c, trip);
  for (const auto& f : mesh.boundary_faces()) {
    trip.push_back({f.cell, f.cell, params.k1 * f.measure});
    b[f.cell] += params.k2 * f.measure * u[f.node];
  }
  const SparseOperator A(mesh.num_cells(), std::move(trip), false);
  return solve_or_throw(A, b, {}, {tol, 50000}, "solve_stationary_V");
}

std::vector<double> solve_surface_helmholtz(const Mesh& mesh, double d, double k2,
                                            std::span<const double> rhs, double tol) {
  if (!(k2 > 0.0)) throw ContractError("solve_surface_helmholtz: k2 must be positive");
  if (rhs.size() != mesh.num_nodes()) throw ContractError("solve_surface_helmholtz: length mismatch");
  std::vector<Triplet> trip;
  std::vector<double> b(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const double s = mesh.surface_nodes()[i].measure;
    trip.push_back({i, i, k2 * s});
    b[i] = s * rhs[i];
  }
  detail::add_surface_laplacian_triplets(mesh, d, 0, trip);
  const SparseOperator A(mesh.num_nodes(), std::move(trip), true);
  return solve_or_throw(A, b, {}, {tol, 20000}, "solve_surface_helmholtz");
}

SteadyResiduals steady_residuals(const Mesh& mesh, const Parameters& params,
                                 std::span<const double> V, std::span<const double> c,
                                 std::span<const double> u) {
  if (V.size() != mesh.num_cells() || c.size() != mesh.num_cells() || u.size() != mesh.num_nodes())
    throw ContractError("steady_residuals: field length mismatch");
  auto relative = [](const std::vector<double>& r, const std::vector<double>& scale) {
    const double s = norm2(scale);
    return s > 0.0 ? norm2(r) / s : norm2(r);
  };
  SteadyResiduals res;

  // c: A c - b(u)
  {
    const auto A = assemble_helmholtz(mesh, params.alpha);
    const auto b = helmholtz_rhs(mesh, c_boundary_source(params.source, params.beta, u));
    auto r = A.apply(c);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
    res.c = relative(r, b);
  }
  // V: SG(c) V + sum |sigma| (k1 V - k2 u)
  {
    std::vector<Triplet> trip;
    detail::add_sg_triplets(mesh, params.D, c, trip);
    std::vector<double> b(mesh.num_cells(), 0.0);
    for (const auto& f : mesh.boundary_faces()) {
      trip.push_back({f.cell, f.cell, params.k1 * f.measure});
      b[f.cell] += params.k2 * f.measure * u[f.node];
    }
    const SparseOperator A(mesh.num_cells(), std::move(trip), false);
    auto r = A.apply(V);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
    res.V = relative(r, b);
  }
  // u: |sigma| (k2 u - d Delta u - k1 trace V)
  {
    const auto tr = trace(mesh, V);
    const auto lap = laplace_beltrami(mesh, u);
    std::vector<double> r(mesh.num_nodes()), b(mesh.num_nodes());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double s = mesh.surface_nodes()[i].measure;
      b[i] = s * params.k1 * tr[i];
      r[i] = s * (params.k2 * u[i] - params.d * lap[i]) - b[i];
    }
    res.u = relative(r, b);
  }
  return res;
}

namespace {

double surface_integral(const Mesh& mesh, std::span<const double> u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += mesh.surface_nodes()[i].measure * u[i];
  return s;
}

double surface_l2(const Mesh& mesh, std::span<const double> u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += mesh.surface_nodes()[i].measure * u[i] * u[i];
  return std::sqrt(s);
}

}  // namespace

SteadyState fixed_point_steady(const Mesh& mesh, const Parameters& params, double mu,
                               const FixedPointOptions& options) {
  params.validate();
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("fixed_point_steady: mu must be nonnegative");
  SteadyState s;
  s.u0 = std::numeric_limits<double>::quiet_NaN();
  s.mu = mu;
  if (mu == 0.0) {
    s.V.assign(mesh.num_cells(), 0.0);
    s.c.assign(mesh.num_cells(), 0.0);
    s.u.assign(mesh.num_nodes(), 0.0);
    s.iterations = 1;
    return s;
  }

  const auto helmholtz = assemble_helmholtz(mesh, params.alpha);
  std::vector<double> u(mesh.num_nodes(), mu / mesh.surface_measure());
  std::vector<double> c, V;
  double prev_diff = std::numeric_limits<double>::infinity();
  int increases = 0;
  s.converged = false;

  for (int it = 1; it <= options.max_iters; ++it) {
    s.iterations = it;
    c = solve_c(helmholtz, mesh, params, u, options.linear_tol, c);
    V = solve_stationary_V(mesh, params, c, u, options.linear_tol);
    auto rhs = trace(mesh, V);
    for (auto& v : rhs) v *= params.k1;
    auto u_new = solve_surface_helmholtz(mesh, params.d, params.k2, rhs, options.linear_tol);

    const double mass_new = surface_integral(mesh, u_new);
    s.max_mass_drift = std::max(s.max_mass_drift, std::abs(mass_new - mu) / mu);
    if (mass_new > 0.0)
      for (auto& v : u_new) v *= mu / mass_new;

    std::vector<double> delta(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) delta[i] = u_new[i] - u[i];
    const double diff = surface_l2(mesh, delta) / surface_l2(mesh, u);

    if (diff > prev_diff) {
      if (++increases >= 2) s.damped = true;
    } else {
      increases = 0;
    }
    prev_diff = diff;

    if (s.damped)
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.5 * (u[i] + u_new[i]);
    else
      u = std::move(u_new);

    if (diff <= options.tol) {
      s.converged = true;
      break;
    }
  }
  // final fields consistent with the returned u
  c = solve_c(helmholtz, mesh, params, u, options.linear_tol, c);
  V = solve_stationary_V(mesh, params, c, u, options.linear_tol);
  s.u = std::move(u);
  s.c = std::move(c);
  s.V = std::move(V);
  double bulk = 0.0;
  for (std::size_t k = 0; k < s.V.size(); ++k) bulk += mesh.cells()[k].measure * s.V[k];
  s.total_mass = mu + bulk;
  s.residual = steady_residuals(mesh, params, s.V, s.c, s.u);
  return s;
}

}  // namespace polaris
