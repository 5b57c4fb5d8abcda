#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "polaris/geometry.hpp"
#include "polaris/model.hpp"
#include "polaris/stepper.hpp"

namespace polaris {

struct GeometryConfig {
  GeometryKind kind = GeometryKind::Disk;
  double R = 1.0;
  std::size_t n = 64;        // radial ball shells
  std::size_t nr = 16;       // disk rings
  std::size_t ntheta = 32;   // disk sectors

  Mesh build() const;
  bool operator==(const GeometryConfig&) const = default;
};

struct InitialConfig {
  enum class Kind { Constant, Gaussian, Snapshot };
  Kind kind = Kind::Constant;
  double V_level = 1.0;
  double u_level = 1.0;
  /// Gaussian bump on the surface: amplitude * exp(-dtheta^2 / (2 width^2))
  /// added to u_level, dtheta the wrapped angular distance to center.
  double amplitude = 1.0;
  double width = 0.5;
  double center = 0.0;
  std::string path;
  /// When positive, V and u are rescaled together so that Q_2(0) equals it.
  double target_q2 = 0.0;

  bool operator==(const InitialConfig&) const = default;
};

struct DiagnosticsConfig {
  std::size_t cadence = 1;
  std::vector<double> p_list{2.0, 4.0};
  bool operator==(const DiagnosticsConfig&) const = default;
};

struct RunConfig {
  std::string scenario = "custom";
  GeometryConfig geometry;
  Parameters params;
  StepperConfig stepper;
  double t_end = 1.0;
  InitialConfig initial;
  DiagnosticsConfig diagnostics;
  std::string output_dir = "out";

  bool operator==(const RunConfig&) const = default;
};

/// Parses the line-oriented `key = value` format with [section] headers.
/// Unknown keys, type mismatches, constraint violations and a missing
/// [geometry] kind are ConfigErrors carrying the line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Normalized form listing every key in a fixed order.
std::string serialize_config(const RunConfig& cfg);

/// Checks cross-field constraints; throws ConfigError.
void validate_config(const RunConfig& cfg);

/// Initial state described by cfg.initial on the given mesh (c left empty).
State make_initial_state(const RunConfig& cfg, const Mesh& mesh);

/// Names of the shipped scenarios.
std::vector<std::string> builtin_scenario_names();
/// Throws ConfigError for an unknown name.
RunConfig builtin_scenario(const std::string& name);

/// Applies `name=value` to one config field, where name is e.g. "beta" or
/// "parameters.beta". Used by sweeps.
void set_config_value(RunConfig& cfg, const std::string& name, const std::string& value);

}  // namespace polaris
