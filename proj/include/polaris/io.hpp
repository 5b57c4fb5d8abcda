#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "polaris/diagnostics.hpp"
#include "polaris/geometry.hpp"
#include "polaris/model.hpp"
#include "polaris/steady.hpp"

namespace polaris {

inline constexpr int kSnapshotVersion = 1;

/// Shortest decimal text that round-trips (17 significant digits).
std::string format_double(double v);

/// CSV header for the given Q_p exponents.
std::string diagnostics_csv_header(std::span<const double> p_values);

/// Writes t, dt, M, Q_<p>..., L4_V, L4_u, L2_u, min_V, max_V, min_u, max_u,
/// trace_L1_V, limiter_count. Columns come from the first row, or from
/// p_values when rows is empty. Throws ContractError if rows disagree on p.
void write_diagnostics_csv(std::span<const DiagnosticsRow> rows, const std::filesystem::path& path,
                           std::span<const double> p_values = {});
std::string diagnostics_csv(std::span<const DiagnosticsRow> rows, std::span<const double> p_values = {});

std::vector<DiagnosticsRow> read_diagnostics_csv(const std::filesystem::path& path);
std::vector<DiagnosticsRow> parse_diagnostics_csv(const std::string& text);

struct SnapshotHeader {
  int version = kSnapshotVersion;
  GeometryKind kind = GeometryKind::RadialBall;
  double R = 1.0;
  std::size_t radial_cells = 1;
  std::size_t angular_cells = 1;
  double t = 0.0;
  Parameters params;

  /// Rebuilds the mesh described by the header.
  Mesh mesh() const;
};

struct Snapshot {
  SnapshotHeader header;
  State state;
};

std::string snapshot_text(const State& state, const Mesh& mesh, const Parameters& params);
void write_snapshot(const State& state, const Mesh& mesh, const Parameters& params,
                    const std::filesystem::path& path);
Snapshot parse_snapshot(const std::string& text);
Snapshot read_snapshot(const std::filesystem::path& path);

/// key = value summary of a steady state.
std::string steady_summary(const SteadyState& s);

std::string read_text_file(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: truncate and write.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace polaris
