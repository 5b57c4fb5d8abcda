#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polaris/geometry.hpp"
#include "polaris/model.hpp"

namespace polaris {

/// Relative residual norms of the three stationary equations.
struct SteadyResiduals {
  double V = 0.0;  // drift-diffusion with Robin exchange
  double c = 0.0;  // screened Poisson with Neumann source
  double u = 0.0;  // surface Helmholtz
};

struct SteadyState {
  std::vector<double> V;
  std::vector<double> c;
  std::vector<double> u;
  double mu = 0.0;          // membrane mass sum |sigma| u
  double total_mass = 0.0;  // mu + sum |K| V
  SteadyResiduals residual;
  int iterations = 0;
  bool converged = true;
  bool damped = false;
  /// Largest pre-projection relative membrane-mass drift seen by the
  /// fixed-point iteration.
  double max_mass_drift = 0.0;
  /// Membrane level of the closed-form spherical family; NaN otherwise.
  double u0 = 0.0;
};

/// Closed-form spherical family. c(r) = c0 sinh(sqrt(alpha) r)/(sqrt(alpha) r)
/// and V = (k2/k1) u0 exp((c(r) - c(R))/D).
struct SphericalProfile {
  double R;
  double u0;
  double c0;
  Parameters params;

  double c(double r) const;
  double V(double r) const;
};

SphericalProfile spherical_profile(const Parameters& params, double R, double u0);

/// M(u0) = 4 pi R^2 u0 + 4 pi (k2/k1) u0 int_0^R r^2 exp((c(r)-c(R))/D) dr by
/// composite Simpson with the given (even) panel count.
double spherical_total_mass(const Parameters& params, double R, double u0, std::size_t panels);

/// Every u0 with M(u0) = M_total, ascending. Sign changes are located on a
/// scan of the bracket and refined by bisection to relative width 1e-12.
std::vector<double> spherical_steady_roots(const Parameters& params, double R, double M_total,
                                           std::size_t n);

/// Smallest-u0 member of the spherical family at total mass M_total, sampled
/// on build_radial_ball_mesh(R, n).
SteadyState spherical_steady_state(const Parameters& params, double R, double M_total, std::size_t n);

/// Stationary V for given c and u: SG fluxes in the bulk, k1 V - k2 u on the
/// boundary.
std::vector<double> solve_stationary_V(const Mesh& mesh, const Parameters& params,
                                       std::span<const double> c, std::span<const double> u,
                                       double tol = 1e-12);

/// Solves (k2 - d Delta_Gamma) u = rhs.
std::vector<double> solve_surface_helmholtz(const Mesh& mesh, double d, double k2,
                                            std::span<const double> rhs, double tol = 1e-12);

/// Relative residuals of (V, c, u) in the discrete stationary system.
SteadyResiduals steady_residuals(const Mesh& mesh, const Parameters& params,
                                 std::span<const double> V, std::span<const double> c,
                                 std::span<const double> u);

struct FixedPointOptions {
  double tol = 1e-10;
  int max_iters = 200;
  double linear_tol = 1e-12;
};

/// u -> c -> V -> u_new iteration at prescribed membrane mass mu, with a
/// multiplicative mass projection each sweep. Returns the last iterate with
/// converged = false when max_iters is reached.
SteadyState fixed_point_steady(const Mesh& mesh, const Parameters& params, double mu,
                               const FixedPointOptions& options = {});

}  // namespace polaris
