#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polaris/geometry.hpp"
#include "polaris/model.hpp"

namespace polaris {

enum class Domain { Bulk, Surface };

/// One time sample of the monitored quantities.
struct DiagnosticsRow {
  double t = 0.0;
  double dt = 0.0;
  double M = 0.0;
  std::vector<double> p_values;  // ascending
  std::vector<double> Q;         // Q_p, aligned with p_values
  double L4_V = 0.0;
  double L4_u = 0.0;
  double L2_u = 0.0;
  double min_V = 0.0;
  double max_V = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double trace_L1_V = 0.0;
  std::size_t limiter_count = 0;

  /// Q_p for a configured p; NaN when p is not present.
  double q_for(double p) const;
  bool operator==(const DiagnosticsRow&) const = default;
};

/// M = sum |K| V_K + sum |sigma| u_sigma.
double total_mass(const Mesh& mesh, const State& state);

/// Q_p = sum |K| V^p + c1 sum |sigma| u^p (+ sum |sigma| u^2 for 1 < p < 2),
/// with c1 = (k2/k1)^(p-1). Throws ContractError for p <= 1.
double q_p(const Mesh& mesh, const Parameters& params, const State& state, double p);

/// (sum measure |f|^p)^(1/p).
double lp_norm(const Mesh& mesh, std::span<const double> field, Domain domain, double p);

/// Evaluates every row field for the given state. p_list is sorted on output.
DiagnosticsRow compute_row(const Mesh& mesh, const Parameters& params, const State& state,
                           double dt, std::vector<double> p_list, std::size_t limiter_count);

/// Heuristic finite-time blow-up monitor over a diagnostics history.
struct BlowupReport {
  double growth_L4_V = 1.0;  // max over history / initial value
  double growth_L4_u = 1.0;
  bool V_exceeded = false;   // grew past growth_threshold at some sample
  bool u_exceeded = false;
  bool concurrent = false;   // both exceeded within one dyadic time window
  /// Least-squares slope of log Q_4 against t; NaN without a Q_4 column or
  /// with fewer than two positive samples.
  double q4_log_rate = 0.0;
  bool one_norm_bounded = true;  // at least one of the two L4 norms stayed below threshold
  double growth_threshold = 10.0;

  std::string to_text() const;
};

/// Dyadic window index of time t: floor(log2 t) for t > 0, a sentinel below
/// every finite index for t <= 0.
long dyadic_window(double t);

/// Throws ContractError on an empty history.
BlowupReport blowup_indicator(std::span<const DiagnosticsRow> history, double growth_threshold = 10.0);

}  // namespace polaris
