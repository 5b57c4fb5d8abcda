#pragma once

#include <span>
#include <vector>

namespace polaris {

class Mesh;

/// Attachment/detachment law. Truncated applies m * tanh(s / m) to
/// s = k1 V - k2 u.
struct ExchangeLaw {
  enum class Kind { Linear, Truncated };
  Kind kind = Kind::Linear;
  double m = 0.0;

  static ExchangeLaw linear() { return {}; }
  static ExchangeLaw truncated(double bound);

  /// Law applied to the net rate s = k1 V - k2 u.
  double apply(double s) const;
  bool operator==(const ExchangeLaw&) const = default;
};

/// Neumann data for c. Truncated gives z_max * tanh(beta u / z_max).
struct SourceLaw {
  enum class Kind { Linear, Truncated };
  Kind kind = Kind::Linear;
  double z_max = 0.0;

  static SourceLaw linear() { return {}; }
  static SourceLaw truncated(double bound);

  double apply(double beta, double u) const;
  bool operator==(const SourceLaw&) const = default;
};

/// Physical constants of one model instance. Defaults are the
/// nondimensional scenario set.
struct Parameters {
  double D = 1.0;
  double d = 0.1;
  double alpha = 1.0;
  double beta = 1.0;
  double k1 = 1.0;
  double k2 = 1.0;
  ExchangeLaw exchange{};
  SourceLaw source{};

  /// Throws ConfigError naming the violated constraint.
  void validate() const;
  bool operator==(const Parameters&) const = default;
};

/// Time plus discrete fields: V and c per cell, u per surface node.
struct State {
  double t = 0.0;
  std::vector<double> V;
  std::vector<double> u;
  std::vector<double> c;

  /// Throws ContractError on length mismatch or non-finite entries.
  /// An empty c is accepted (not yet computed).
  void validate(const Mesh& mesh) const;
  bool nonnegative() const;
};

std::vector<double> exchange_flux(const ExchangeLaw& law, double k1, double k2,
                                  std::span<const double> V_trace, std::span<const double> u);

std::vector<double> c_boundary_source(const SourceLaw& law, double beta,
                                      std::span<const double> u);

}  // namespace polaris
