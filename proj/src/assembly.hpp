#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polaris/geometry.hpp"
#include "polaris/sparse.hpp"
#include "polaris/stepper.hpp"

namespace polaris::detail {

/// SG drift-diffusion coupling of every interior face.
inline void add_sg_triplets(const Mesh& mesh, double D, std::span<const double> c,
                            std::vector<Triplet>& trip) {
  for (const auto& f : mesh.interior_faces()) {
    const double tD = f.measure / f.distance * D;
    const double P = (c[f.outer] - c[f.inner]) / D;
    const double bm = bernoulli(-P);
    const double bp = bernoulli(P);
    trip.push_back({f.inner, f.inner, tD * bm});
    trip.push_back({f.inner, f.outer, -tD * bp});
    trip.push_back({f.outer, f.outer, tD * bp});
    trip.push_back({f.outer, f.inner, -tD * bm});
  }
}

/// -d * |sigma| Delta_Gamma in mass units, rows shifted by offset.
inline void add_surface_laplacian_triplets(const Mesh& mesh, double d, std::size_t offset,
                                           std::vector<Triplet>& trip) {
  for (const auto& e : mesh.surface_edges()) {
    const double w = d * e.weight;
    trip.push_back({offset + e.a, offset + e.a, w});
    trip.push_back({offset + e.b, offset + e.b, w});
    trip.push_back({offset + e.a, offset + e.b, -w});
    trip.push_back({offset + e.b, offset + e.a, -w});
  }
}

}  // namespace polaris::detail
