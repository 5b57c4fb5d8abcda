// Command-line entry point: run, steady, steady-spherical, sweep, verify.
#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "polaris/acceptance.hpp"
#include "polaris/config.hpp"
#include "polaris/diagnostics.hpp"
#include "polaris/errors.hpp"
#include "polaris/io.hpp"
#include "polaris/sparse.hpp"
#include "polaris/steady.hpp"
#include "polaris/stepper.hpp"

namespace fs = std::filesystem;
using namespace polaris;

namespace {

constexpr int kOk = 0;
constexpr int kScenarioFailure = 1;
constexpr int kConfigError = 2;

RunConfig resolve_config(const std::string& config, const std::string& scenario) {
  if (!scenario.empty()) return builtin_scenario(scenario);
  if (config.empty()) throw ConfigError("either --config or --scenario is required");
  return load_config(config);
}

struct RunSummary {
  Termination reason;
  std::string text;
};

/// Runs one configuration and writes its artifacts into cfg.output_dir.
RunSummary execute_run(const RunConfig& cfg) {
  const auto mesh = cfg.geometry.build();
  const auto init = make_initial_state(cfg, mesh);
  const fs::path out = cfg.output_dir;
  fs::create_directories(out);
  write_text_file(out / "config.ini", serialize_config(cfg));
  write_text_file(out / "mesh.txt", mesh.summary());

  RunOptions opts;
  opts.t_end = cfg.t_end;
  opts.record_every = cfg.diagnostics.cadence;
  opts.p_list = cfg.diagnostics.p_list;
  const auto outcome = run(mesh, cfg.params, cfg.stepper, init, opts);

  // initial state with c solved, matching the first diagnostics row
  State first = Stepper(mesh, cfg.params, cfg.stepper).prepare(init);
  write_snapshot(first, mesh, cfg.params, out / "initial.snapshot");
  if (outcome.final_state.t > init.t)
    write_snapshot(outcome.final_state, mesh, cfg.params, out / "final.snapshot");
  write_diagnostics_csv(outcome.history, out / "diagnostics.csv", cfg.diagnostics.p_list);
  const auto report = blowup_indicator(outcome.history);
  write_text_file(out / "blowup_report.txt", report.to_text());

  std::ostringstream os;
  os << "scenario = " << cfg.scenario << '\n'
     << "termination = " << to_string(outcome.reason) << '\n'
     << "t = " << format_double(outcome.final_state.t) << '\n'
     << "accepted_steps = " << outcome.accepted_steps << '\n'
     << "rejected_steps = " << outcome.rejected_steps << '\n'
     << "limiter_activations = " << outcome.limiter_activations << '\n'
     << "max_mass_drift = " << format_double(outcome.max_mass_drift) << '\n'
     << "min_V = " << format_double(outcome.min_V) << '\n'
     << "min_u = " << format_double(outcome.min_u) << '\n'
     << "min_c = " << format_double(outcome.min_c) << '\n';
  if (!outcome.message.empty()) os << "message = " << outcome.message << '\n';
  write_text_file(out / "summary.txt", os.str());
  return {outcome.reason, os.str()};
}

int thread_cap() {
  if (const char* env = std::getenv("POLARIS_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<std::string> split_values(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polaris: bulk/surface polarisation model solver"};
  app.require_subcommand(1);

  std::string config, scenario, out_dir, param, values;
  double t_end = -1.0, mu = 0.0, mass = 0.0;

  auto* run_cmd = app.add_subcommand("run", "time integration of one configuration");
  run_cmd->add_option("--config", config, "configuration file");
  run_cmd->add_option("--scenario", scenario, "built-in scenario name instead of a file");
  run_cmd->add_option("--t-end", t_end, "override the final time");
  run_cmd->add_option("--out-dir", out_dir, "override the output directory");

  auto* steady_cmd = app.add_subcommand("steady", "fixed-point steady state at membrane mass mu");
  steady_cmd->add_option("--config", config, "configuration file");
  steady_cmd->add_option("--scenario", scenario, "built-in scenario name instead of a file");
  steady_cmd->add_option("--mu", mu, "membrane mass")->required();
  steady_cmd->add_option("--out-dir", out_dir, "override the output directory");

  auto* sph_cmd = app.add_subcommand("steady-spherical", "closed-form spherical steady state");
  sph_cmd->add_option("--config", config, "configuration file");
  sph_cmd->add_option("--scenario", scenario, "built-in scenario name instead of a file");
  sph_cmd->add_option("--mass", mass, "total mass")->required();
  sph_cmd->add_option("--out-dir", out_dir, "override the output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "independent runs over one parameter");
  sweep_cmd->add_option("--config", config, "configuration file");
  sweep_cmd->add_option("--scenario", scenario, "built-in scenario name instead of a file");
  sweep_cmd->add_option("--param", param, "parameter name, e.g. beta or parameters.beta")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")->required();
  sweep_cmd->add_option("--t-end", t_end, "override the final time");
  sweep_cmd->add_option("--out-dir", out_dir, "override the output directory");

  auto* verify_cmd = app.add_subcommand("verify", "run the built-in acceptance scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (verify_cmd->parsed()) {
      const auto results = run_acceptance(&std::cout);
      const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
      return ok ? kOk : kScenarioFailure;
    }

    RunConfig cfg = resolve_config(config, scenario);
    if (!out_dir.empty()) cfg.output_dir = out_dir;

    if (run_cmd->parsed()) {
      if (t_end >= 0.0) cfg.t_end = t_end;
      validate_config(cfg);
      const auto s = execute_run(cfg);
      std::cout << s.text;
      if (s.reason == Termination::BlowupSuspected)
        std::cerr << "note: blow-up suspected by the heuristic monitor (not a verdict)\n";
      return s.reason == Termination::SolverFailure ? kScenarioFailure : kOk;
    }

    if (steady_cmd->parsed()) {
      const auto mesh = cfg.geometry.build();
      const auto s = fixed_point_steady(mesh, cfg.params, mu);
      fs::create_directories(cfg.output_dir);
      State st{0.0, s.V, s.u, s.c};
      write_snapshot(st, mesh, cfg.params, fs::path(cfg.output_dir) / "steady.snapshot");
      write_text_file(fs::path(cfg.output_dir) / "steady_summary.txt", steady_summary(s));
      std::cout << steady_summary(s);
      if (!s.converged) std::cerr << "fixed-point iteration did not converge\n";
      return s.converged ? kOk : kScenarioFailure;
    }

    if (sph_cmd->parsed()) {
      const std::size_t n = cfg.geometry.kind == GeometryKind::RadialBall ? cfg.geometry.n : cfg.geometry.nr;
      const auto roots = spherical_steady_roots(cfg.params, cfg.geometry.R, mass, n);
      const auto s = spherical_steady_state(cfg.params, cfg.geometry.R, mass, n);
      const auto mesh = build_radial_ball_mesh(cfg.geometry.R, n);
      fs::create_directories(cfg.output_dir);
      State st{0.0, s.V, s.u, s.c};
      write_snapshot(st, mesh, cfg.params, fs::path(cfg.output_dir) / "steady_spherical.snapshot");
      std::string text = steady_summary(s);
      text += "roots =";
      for (double r : roots) text += " " + format_double(r);
      text += "\n";
      write_text_file(fs::path(cfg.output_dir) / "steady_spherical_summary.txt", text);
      std::cout << text;
      return kOk;
    }

    if (sweep_cmd->parsed()) {
      if (t_end >= 0.0) cfg.t_end = t_end;
      const auto vals = split_values(values);
      if (vals.empty()) throw ConfigError("--values is empty");
      std::vector<RunConfig> jobs;
      for (const auto& v : vals) {
        RunConfig c = cfg;
        set_config_value(c, param, v);
        validate_config(c);
        c.output_dir = (fs::path(cfg.output_dir) / (param + "=" + v)).string();
        jobs.push_back(std::move(c));
      }
      std::vector<std::string> lines(jobs.size());
      std::vector<int> codes(jobs.size(), kOk);
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
          try {
            const auto s = execute_run(jobs[i]);
            lines[i] = param + "=" + vals[i] + " " + to_string(s.reason);
            if (s.reason == Termination::SolverFailure) codes[i] = kScenarioFailure;
          } catch (const std::exception& e) {
            lines[i] = param + "=" + vals[i] + " error: " + e.what();
            codes[i] = kScenarioFailure;
          }
        }
      };
      const int nthreads = std::min<int>(thread_cap(), static_cast<int>(jobs.size()));
      std::vector<std::thread> pool;
      for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      for (const auto& l : lines) std::cout << l << '\n';
      return *std::max_element(codes.begin(), codes.end());
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kScenarioFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kScenarioFailure;
  }
  return kOk;
}
