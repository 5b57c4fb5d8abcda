#include "polaris/elliptic.hpp"

#include <cmath>

#include "polaris/errors.hpp"

namespace polaris {

SparseOperator assemble_helmholtz(const Mesh& mesh, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("assemble_helmholtz: alpha must be positive");
  std::vector<Triplet> trip;
  trip.reserve(mesh.num_cells() + 4 * mesh.interior_faces().size());
  for (std::size_t k = 0; k < mesh.num_cells(); ++k)
    trip.push_back({k, k, alpha * mesh.cells()[k].measure});
  for (const auto& f : mesh.interior_faces()) {
    const double tau = f.measure / f.distance;
    trip.push_back({f.inner, f.inner, tau});
    trip.push_back({f.outer, f.outer, tau});
    trip.push_back({f.inner, f.outer, -tau});
    trip.push_back({f.outer, f.inner, -tau});
  }
  return SparseOperator(mesh.num_cells(), std::move(trip), true);
}

std::vector<double> helmholtz_rhs(const Mesh& mesh, std::span<const double> boundary_flux) {
  if (boundary_flux.size() != mesh.num_nodes())
    throw ContractError("helmholtz_rhs: boundary data length mismatch");
  std::vector<double> b(mesh.num_cells(), 0.0);
  for (const auto& f : mesh.boundary_faces()) b[f.cell] += boundary_flux[f.node] * f.measure;
  return b;
}

std::vector<double> solve_c(const SparseOperator& A, const Mesh& mesh, const Parameters& params,
                            std::span<const double> u, double tol, std::vector<double> guess) {
  if (u.size() != mesh.num_nodes()) throw ContractError("solve_c: u length mismatch");
  if (!(tol > 0.0)) throw ContractError("solve_c: tolerance must be positive");
  for (double v : u)
    if (!std::isfinite(v)) throw ContractError("solve_c: non-finite surface value");
  const auto g = c_boundary_source(params.source, params.beta, u);
  const auto b = helmholtz_rhs(mesh, g);
  return solve_or_throw(A, b, std::move(guess), {tol, 20000}, "solve_c");
}

std::vector<double> solve_c(const Mesh& mesh, const Parameters& params, std::span<const double> u,
                            double tol) {
  return solve_c(assemble_helmholtz(mesh, params.alpha), mesh, params, u, tol);
}

}  // namespace polaris
