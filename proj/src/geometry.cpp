#include "polaris/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "polaris/errors.hpp"

namespace polaris {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string to_string(GeometryKind kind) {
  return kind == GeometryKind::RadialBall ? "radial_ball" : "disk";
}

double Mesh::bulk_measure() const {
  double s = 0.0;
  for (const auto& c : cells_) s += c.measure;
  return s;
}

double Mesh::surface_measure() const {
  double s = 0.0;
  for (const auto& n : nodes_) s += n.measure;
  return s;
}

double Mesh::exact_bulk_measure() const {
  return kind_ == GeometryKind::RadialBall ? 4.0 / 3.0 * kPi * radius_ * radius_ * radius_
                                           : kPi * radius_ * radius_;
}

double Mesh::exact_surface_measure() const {
  return kind_ == GeometryKind::RadialBall ? 4.0 * kPi * radius_ * radius_ : 2.0 * kPi * radius_;
}

void Mesh::finalize() {
  bf_per_cell_.assign(cells_.size(), 0);
  for (const auto& f : boundary_) ++bf_per_cell_[f.cell];
}

std::string Mesh::summary() const {
  std::ostringstream os;
  os.precision(17);
  os << "geometry = " << to_string(kind_) << '\n'
     << "R = " << radius_ << '\n'
     << "radial_cells = " << nr_ << '\n'
     << "angular_cells = " << ntheta_ << '\n'
     << "cells = " << cells_.size() << '\n'
     << "interior_faces = " << interior_.size() << '\n'
     << "boundary_faces = " << boundary_.size() << '\n'
     << "surface_nodes = " << nodes_.size() << '\n'
     << "surface_edges = " << edges_.size() << '\n'
     << "bulk_measure = " << bulk_measure() << '\n'
     << "surface_measure = " << surface_measure() << '\n';
  return os.str();
}

Mesh build_radial_ball_mesh(double R, std::size_t n) {
  if (!(R > 0.0) || !std::isfinite(R))
    throw ConfigError("radial ball mesh: radius must be positive, got " + std::to_string(R));
  if (n == 0) throw ConfigError("radial ball mesh: cell count n must be at least 1");

  Mesh m;
  m.kind_ = GeometryKind::RadialBall;
  m.radius_ = R;
  m.nr_ = n;
  m.ntheta_ = 1;
  const double h = R / static_cast<double>(n);
  m.cells_.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r0 = h * static_cast<double>(j);
    // last outer radius pinned to R so the shells telescope to |B| exactly
    const double r1 = (j + 1 == n) ? R : h * static_cast<double>(j + 1);
    m.cells_.push_back({0.5 * (r0 + r1), 0.0, 4.0 / 3.0 * kPi * (r1 * r1 * r1 - r0 * r0 * r0)});
    if (j + 1 < n) m.interior_.push_back({j, j + 1, 4.0 * kPi * r1 * r1, h});
  }
  m.boundary_.push_back({n - 1, 4.0 * kPi * R * R, 0.5 * h, 0});
  m.nodes_.push_back({0.0, 4.0 * kPi * R * R, 0});
  m.finalize();
  return m;
}

Mesh build_disk_mesh(double R, std::size_t nr, std::size_t ntheta) {
  if (!(R > 0.0) || !std::isfinite(R))
    throw ConfigError("disk mesh: radius must be positive, got " + std::to_string(R));
  if (nr == 0) throw ConfigError("disk mesh: radial count nr must be at least 1");
  if (ntheta < 3)
    throw ConfigError("disk mesh: angular count ntheta must be at least 3 (degenerate cycle), got " +
                      std::to_string(ntheta));

  Mesh m;
  m.kind_ = GeometryKind::Disk;
  m.radius_ = R;
  m.nr_ = nr;
  m.ntheta_ = ntheta;
  const double h = R / static_cast<double>(nr);
  const double dtheta = 2.0 * kPi / static_cast<double>(ntheta);

  m.cells_.reserve(nr * ntheta);
  for (std::size_t j = 0; j < nr; ++j) {
    const double r0 = h * static_cast<double>(j);
    const double r1 = (j + 1 == nr) ? R : h * static_cast<double>(j + 1);
    const double rc = 0.5 * (r0 + r1);
    for (std::size_t k = 0; k < ntheta; ++k) {
      const double theta = (static_cast<double>(k) + 0.5) * dtheta;
      m.cells_.push_back({rc, theta, 0.5 * dtheta * (r1 * r1 - r0 * r0)});
    }
  }
  for (std::size_t j = 0; j < nr; ++j) {
    const double r1 = (j + 1 == nr) ? R : h * static_cast<double>(j + 1);
    const double rc = m.cells_[m.cell_index(j, 0)].r;
    for (std::size_t k = 0; k < ntheta; ++k) {
      const std::size_t here = m.cell_index(j, k);
      m.interior_.push_back({here, m.cell_index(j, (k + 1) % ntheta), h, rc * dtheta});
      if (j + 1 < nr) m.interior_.push_back({here, m.cell_index(j + 1, k), r1 * dtheta, h});
    }
  }
  const double arc = R * dtheta;
  for (std::size_t k = 0; k < ntheta; ++k) {
    m.boundary_.push_back({m.cell_index(nr - 1, k), arc, 0.5 * h, k});
    m.nodes_.push_back({(static_cast<double>(k) + 0.5) * dtheta, arc, k});
    m.edges_.push_back({k, (k + 1) % ntheta, 1.0 / arc});
  }
  m.finalize();
  return m;
}

std::vector<double> trace(const Mesh& mesh, std::span<const double> bulk) {
  if (bulk.size() != mesh.num_cells())
    throw ContractError("trace: bulk field has " + std::to_string(bulk.size()) +
                        " entries, mesh has " + std::to_string(mesh.num_cells()) + " cells");
  std::vector<double> out(mesh.num_nodes());
  for (const auto& f : mesh.boundary_faces()) out[f.node] = bulk[f.cell];
  return out;
}

std::vector<double> laplace_beltrami(const Mesh& mesh, std::span<const double> surface) {
  if (surface.size() != mesh.num_nodes())
    throw ContractError("laplace_beltrami: surface field length mismatch");
  std::vector<double> out(mesh.num_nodes(), 0.0);
  for (const auto& e : mesh.surface_edges()) {
    const double flux = e.weight * (surface[e.b] - surface[e.a]);
    out[e.a] += flux;
    out[e.b] -= flux;
  }
  const auto& nodes = mesh.surface_nodes();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= nodes[i].measure;
  return out;
}

}  // namespace polaris
