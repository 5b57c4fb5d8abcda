#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace polaris {

enum class GeometryKind { RadialBall, Disk };

std::string to_string(GeometryKind kind);

/// Bulk control volume. Polar coordinates of the center; theta is 0 for the ball.
struct Cell {
  double r;
  double theta;
  double measure;
};

struct InteriorFace {
  std::size_t inner;
  std::size_t outer;
  double measure;
  double distance;
};

struct BoundaryFace {
  std::size_t cell;
  double measure;
  double distance;  // cell center to face
  std::size_t node;
};

struct SurfaceNode {
  double theta;
  double measure;
  std::size_t face;
};

/// Edge of the surface graph; weight is 1 / (arc distance between nodes).
struct SurfaceEdge {
  std::size_t a;
  std::size_t b;
  double weight;
};

/// Finite-volume mesh of the bulk domain together with its matched surface
/// mesh. Immutable once built.
class Mesh {
 public:
  GeometryKind kind() const { return kind_; }
  double radius() const { return radius_; }
  /// Radial cell count (n for the ball, nr for the disk).
  std::size_t radial_cells() const { return nr_; }
  /// Angular cell count; 1 for the ball.
  std::size_t angular_cells() const { return ntheta_; }

  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_nodes() const { return nodes_.size(); }

  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<InteriorFace>& interior_faces() const { return interior_; }
  const std::vector<BoundaryFace>& boundary_faces() const { return boundary_; }
  const std::vector<SurfaceNode>& surface_nodes() const { return nodes_; }
  const std::vector<SurfaceEdge>& surface_edges() const { return edges_; }

  /// Number of boundary faces touching each cell.
  const std::vector<std::size_t>& boundary_faces_per_cell() const { return bf_per_cell_; }

  double bulk_measure() const;
  double surface_measure() const;
  /// |B| and |Gamma| from the exact formulas.
  double exact_bulk_measure() const;
  double exact_surface_measure() const;

  /// Cell index of ring j, sector k (disk) or shell j (ball, k = 0).
  std::size_t cell_index(std::size_t j, std::size_t k) const { return j * ntheta_ + k; }

  /// Structured-text summary (counts and measures) for debugging.
  std::string summary() const;

  friend Mesh build_radial_ball_mesh(double R, std::size_t n);
  friend Mesh build_disk_mesh(double R, std::size_t nr, std::size_t ntheta);

 private:
  Mesh() = default;
  void finalize();

  GeometryKind kind_ = GeometryKind::RadialBall;
  double radius_ = 0.0;
  std::size_t nr_ = 0;
  std::size_t ntheta_ = 1;
  std::vector<Cell> cells_;
  std::vector<InteriorFace> interior_;
  std::vector<BoundaryFace> boundary_;
  std::vector<SurfaceNode> nodes_;
  std::vector<SurfaceEdge> edges_;
  std::vector<std::size_t> bf_per_cell_;
};

/// n concentric shells of width R/n. One boundary face, one surface node.
Mesh build_radial_ball_mesh(double R, std::size_t n);

/// Polar tensor grid of nr rings by ntheta sectors. The innermost ring is a
/// set of wedges meeting at the origin with no face at r = 0.
Mesh build_disk_mesh(double R, std::size_t nr, std::size_t ntheta);

/// Piecewise-constant trace: value of the boundary-adjacent cell per node.
std::vector<double> trace(const Mesh& mesh, std::span<const double> bulk);

/// Discrete Laplace-Beltrami operator per node, (Delta_Gamma u)_i.
/// Identically zero on the ball (single node).
std::vector<double> laplace_beltrami(const Mesh& mesh, std::span<const double> surface);

}  // namespace polaris
