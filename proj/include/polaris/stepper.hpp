#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "polaris/diagnostics.hpp"
#include "polaris/geometry.hpp"
#include "polaris/model.hpp"
#include "polaris/sparse.hpp"

namespace polaris {

/// Bernoulli function B(x) = x / (e^x - 1), B(0) = 1.
double bernoulli(double x);

/// Scharfetter-Gummel flux of V from cell K to cell L for the combined
/// operator -D grad V + V grad c.
double sg_face_flux(double D, double c_K, double c_L, double V_K, double V_L, double measure,
                    double distance);

struct StepperConfig {
  double dt_init = 1e-3;
  double dt_min = 1e-9;
  double dt_max = 1e-2;
  double grow = 1.25;
  double shrink = 0.5;
  double linear_tol = 1e-12;
  /// Blow-up is suspected once max(|V|_inf, |u|_inf) reaches this multiple
  /// of its initial value.
  double blowup_factor = 1e6;
  std::size_t max_steps = 2'000'000;
  double max_relative_change = 0.1;
  /// Consecutive forced steps at dt_min before blow-up is suspected.
  std::size_t pinned_limit = 10;

  void validate() const;
  bool operator==(const StepperConfig&) const = default;
};

struct StepResult {
  State state;
  std::size_t limiter_activations = 0;
};

/// Holds the operators shared by every step of one run.
class Stepper {
 public:
  Stepper(const Mesh& mesh, const Parameters& params, const StepperConfig& config);

  /// Returns a copy of the state with c solved from u.
  State prepare(State state) const;

  /// One first-order step of size dt. Throws SolverError on a failed linear
  /// solve or a non-finite result.
  StepResult step(const State& state, double dt) const;

  /// Largest dt for the explicit truncated exchange; infinity for the linear law.
  double explicit_dt_limit() const;

  const Mesh& mesh() const { return mesh_; }
  const Parameters& params() const { return params_; }
  const StepperConfig& config() const { return config_; }

 private:
  StepResult step_linear(const State& s, double dt) const;
  StepResult step_truncated(const State& s, double dt) const;
  void add_sg_block(std::vector<Triplet>& trip, const std::vector<double>& c) const;
  void sg_fluxes(const std::vector<double>& c, const std::vector<double>& V,
                 std::vector<double>& net_out) const;
  void surface_fluxes(const std::vector<double>& u, std::vector<double>& net_in) const;
  std::vector<double> finalize_c(const std::vector<double>& u, const std::vector<double>& guess) const;

  const Mesh& mesh_;
  Parameters params_;
  StepperConfig config_;
  SparseOperator helmholtz_;
};

/// Free-function form of Stepper::step.
StepResult step(const Mesh& mesh, const Parameters& params, const StepperConfig& config,
                const State& state, double dt);

enum class Termination { ReachedTEnd, BlowupSuspected, SolverFailure };

std::string to_string(Termination reason);

struct RunOptions {
  double t_end = 1.0;
  /// A row is recorded every record_every accepted steps, plus the first and last.
  std::size_t record_every = 1;
  std::vector<double> p_list{2.0, 4.0};
  /// Called for every recorded row with the corresponding state.
  std::function<void(const DiagnosticsRow&, const State&)> sink;
};

struct RunOutcome {
  State final_state;
  Termination reason = Termination::ReachedTEnd;
  std::vector<DiagnosticsRow> history;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t limiter_activations = 0;
  // minima over every accepted state, including the initial one
  double min_V = 0.0;
  double min_u = 0.0;
  double min_c = 0.0;
  double max_mass_drift = 0.0;  // max |M(t) - M(0)| / M(0) over accepted states
  std::string message;
};

/// Adaptive time integration to options.t_end.
RunOutcome run(const Mesh& mesh, const Parameters& params, const StepperConfig& config,
               const State& initial, const RunOptions& options);

}  // namespace polaris
