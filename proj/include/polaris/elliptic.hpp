#pragma once

#include <span>
#include <vector>

#include "polaris/geometry.hpp"
#include "polaris/model.hpp"
#include "polaris/sparse.hpp"

namespace polaris {

/// Two-point flux finite-volume operator for -Laplace(c) + alpha c with pure
/// Neumann boundary: A_KK = sum of face transmissibilities + alpha |K|.
SparseOperator assemble_helmholtz(const Mesh& mesh, double alpha);

/// b_K = sum over boundary faces of K of g_sigma |sigma|.
std::vector<double> helmholtz_rhs(const Mesh& mesh, std::span<const double> boundary_flux);

/// Screened-Poisson solve for c with Neumann data from the source law.
std::vector<double> solve_c(const Mesh& mesh, const Parameters& params, std::span<const double> u,
                            double tol = 1e-12);

/// Same with a pre-assembled operator (must come from assemble_helmholtz on
/// this mesh with params.alpha).
std::vector<double> solve_c(const SparseOperator& A, const Mesh& mesh, const Parameters& params,
                            std::span<const double> u, double tol,
                            std::vector<double> guess = {});

}  // namespace polaris
