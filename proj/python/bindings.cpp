#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "polaris/acceptance.hpp"
#include "polaris/config.hpp"
#include "polaris/diagnostics.hpp"
#include "polaris/elliptic.hpp"
#include "polaris/errors.hpp"
#include "polaris/io.hpp"
#include "polaris/sparse.hpp"
#include "polaris/steady.hpp"
#include "polaris/stepper.hpp"

namespace py = pybind11;
using namespace polaris;

PYBIND11_MODULE(_polaris, m) {
    m.doc() = "Bulk/surface polarisation model: meshes, time stepping, diagnostics and steady states.";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::enum_<GeometryKind>(m, "GeometryKind")
        .value("RadialBall", GeometryKind::RadialBall)
        .value("Disk", GeometryKind::Disk);

    py::class_<Mesh>(m, "Mesh")
        .def_property_readonly("kind", &Mesh::kind)
        .def_property_readonly("radius", &Mesh::radius)
        .def_property_readonly("num_cells", &Mesh::num_cells)
        .def_property_readonly("num_nodes", &Mesh::num_nodes)
        .def("bulk_measure", &Mesh::bulk_measure)
        .def("surface_measure", &Mesh::surface_measure)
        .def("cell_measures", [](const Mesh& mesh) {
            std::vector<double> out;
            for (const auto& c : mesh.cells()) out.push_back(c.measure);
            return out;
        })
        .def("cell_radii", [](const Mesh& mesh) {
            std::vector<double> out;
            for (const auto& c : mesh.cells()) out.push_back(c.r);
            return out;
        })
        .def("node_measures", [](const Mesh& mesh) {
            std::vector<double> out;
            for (const auto& n : mesh.surface_nodes()) out.push_back(n.measure);
            return out;
        })
        .def("summary", &Mesh::summary);

    m.def("build_radial_ball_mesh", &build_radial_ball_mesh, py::arg("R"), py::arg("n"));
    m.def("build_disk_mesh", &build_disk_mesh, py::arg("R"), py::arg("nr"), py::arg("ntheta"));
    m.def("trace", [](const Mesh& mesh, const std::vector<double>& V) { return trace(mesh, V); });
    m.def("laplace_beltrami", [](const Mesh& mesh, const std::vector<double>& u) { return laplace_beltrami(mesh, u); });

    py::class_<ExchangeLaw>(m, "ExchangeLaw")
        .def_static("linear", &ExchangeLaw::linear)
        .def_static("truncated", &ExchangeLaw::truncated, py::arg("m"))
        .def_property_readonly("truncated_bound", [](const ExchangeLaw& l) {
            return l.kind == ExchangeLaw::Kind::Truncated ? py::object(py::float_(l.m)) : py::object(py::none());
        })
        .def("apply", &ExchangeLaw::apply)
        .def(py::self == py::self);

    py::class_<SourceLaw>(m, "SourceLaw")
        .def_static("linear", &SourceLaw::linear)
        .def_static("truncated", &SourceLaw::truncated, py::arg("z_max"))
        .def_property_readonly("truncated_bound", [](const SourceLaw& l) {
            return l.kind == SourceLaw::Kind::Truncated ? py::object(py::float_(l.z_max)) : py::object(py::none());
        })
        .def("apply", &SourceLaw::apply)
        .def(py::self == py::self);

    py::class_<Parameters>(m, "Parameters")
        .def(py::init<>())
        .def_readwrite("D", &Parameters::D)
        .def_readwrite("d", &Parameters::d)
        .def_readwrite("alpha", &Parameters::alpha)
        .def_readwrite("beta", &Parameters::beta)
        .def_readwrite("k1", &Parameters::k1)
        .def_readwrite("k2", &Parameters::k2)
        .def_readwrite("exchange", &Parameters::exchange)
        .def_readwrite("source", &Parameters::source)
        .def("validate", &Parameters::validate)
        .def(py::self == py::self);

    py::class_<State>(m, "State")
        .def(py::init<>())
        .def(py::init([](double t, std::vector<double> V, std::vector<double> u, std::vector<double> c) {
                 return State{t, std::move(V), std::move(u), std::move(c)};
             }),
             py::arg("t") = 0.0, py::arg("V"), py::arg("u"), py::arg("c") = std::vector<double>{})
        .def_readwrite("t", &State::t)
        .def_readwrite("V", &State::V)
        .def_readwrite("u", &State::u)
        .def_readwrite("c", &State::c)
        .def("nonnegative", &State::nonnegative);

    m.def("exchange_flux", [](const ExchangeLaw& law, double k1, double k2, const std::vector<double>& V,
                              const std::vector<double>& u) { return exchange_flux(law, k1, k2, V, u); });
    m.def("c_boundary_source", [](const SourceLaw& law, double beta, const std::vector<double>& u) {
        return c_boundary_source(law, beta, u);
    });
    m.def("solve_c",
          [](const Mesh& mesh, const Parameters& p, const std::vector<double>& u, double tol) {
              return solve_c(mesh, p, u, tol);
          },
          py::arg("mesh"), py::arg("params"), py::arg("u"), py::arg("tol") = 1e-12);

    py::class_<StepperConfig>(m, "StepperConfig")
        .def(py::init<>())
        .def_readwrite("dt_init", &StepperConfig::dt_init)
        .def_readwrite("dt_min", &StepperConfig::dt_min)
        .def_readwrite("dt_max", &StepperConfig::dt_max)
        .def_readwrite("grow", &StepperConfig::grow)
        .def_readwrite("shrink", &StepperConfig::shrink)
        .def_readwrite("linear_tol", &StepperConfig::linear_tol)
        .def_readwrite("blowup_factor", &StepperConfig::blowup_factor)
        .def_readwrite("max_steps", &StepperConfig::max_steps)
        .def_readwrite("max_relative_change", &StepperConfig::max_relative_change)
        .def_readwrite("pinned_limit", &StepperConfig::pinned_limit)
        .def("validate", &StepperConfig::validate);

    m.def("bernoulli", &bernoulli);
    m.def("sg_face_flux", &sg_face_flux, py::arg("D"), py::arg("c_K"), py::arg("c_L"), py::arg("V_K"),
          py::arg("V_L"), py::arg("measure"), py::arg("distance"));
    m.def("step",
          [](const Mesh& mesh, const Parameters& p, const StepperConfig& cfg, const State& s, double dt) {
              return step(mesh, p, cfg, s, dt).state;
          },
          py::arg("mesh"), py::arg("params"), py::arg("config"), py::arg("state"), py::arg("dt"));

    py::enum_<Termination>(m, "Termination")
        .value("ReachedTEnd", Termination::ReachedTEnd)
        .value("BlowupSuspected", Termination::BlowupSuspected)
        .value("SolverFailure", Termination::SolverFailure);

    py::class_<DiagnosticsRow>(m, "DiagnosticsRow")
        .def_readonly("t", &DiagnosticsRow::t)
        .def_readonly("dt", &DiagnosticsRow::dt)
        .def_readonly("M", &DiagnosticsRow::M)
        .def_readonly("p_values", &DiagnosticsRow::p_values)
        .def_readonly("Q", &DiagnosticsRow::Q)
        .def_readonly("L4_V", &DiagnosticsRow::L4_V)
        .def_readonly("L4_u", &DiagnosticsRow::L4_u)
        .def_readonly("L2_u", &DiagnosticsRow::L2_u)
        .def_readonly("min_V", &DiagnosticsRow::min_V)
        .def_readonly("max_V", &DiagnosticsRow::max_V)
        .def_readonly("min_u", &DiagnosticsRow::min_u)
        .def_readonly("max_u", &DiagnosticsRow::max_u)
        .def_readonly("trace_L1_V", &DiagnosticsRow::trace_L1_V)
        .def_readonly("limiter_count", &DiagnosticsRow::limiter_count)
        .def("q_for", &DiagnosticsRow::q_for);

    py::class_<RunOutcome>(m, "RunOutcome")
        .def_readonly("final_state", &RunOutcome::final_state)
        .def_readonly("reason", &RunOutcome::reason)
        .def_readonly("history", &RunOutcome::history)
        .def_readonly("accepted_steps", &RunOutcome::accepted_steps)
        .def_readonly("rejected_steps", &RunOutcome::rejected_steps)
        .def_readonly("limiter_activations", &RunOutcome::limiter_activations)
        .def_readonly("min_V", &RunOutcome::min_V)
        .def_readonly("min_u", &RunOutcome::min_u)
        .def_readonly("min_c", &RunOutcome::min_c)
        .def_readonly("max_mass_drift", &RunOutcome::max_mass_drift)
        .def_readonly("message", &RunOutcome::message);

    m.def("run",
          [](const Mesh& mesh, const Parameters& p, const StepperConfig& cfg, const State& initial, double t_end,
             std::size_t record_every, std::vector<double> p_list) {
              RunOptions opts;
              opts.t_end = t_end;
              opts.record_every = record_every;
              opts.p_list = std::move(p_list);
              py::gil_scoped_release release;
              return run(mesh, p, cfg, initial, opts);
          },
          py::arg("mesh"), py::arg("params"), py::arg("config"), py::arg("initial"), py::arg("t_end"),
          py::arg("record_every") = 1, py::arg("p_list") = std::vector<double>{2.0, 4.0});

    py::enum_<Domain>(m, "Domain").value("Bulk", Domain::Bulk).value("Surface", Domain::Surface);
    m.def("total_mass", &total_mass);
    m.def("q_p", &q_p, py::arg("mesh"), py::arg("params"), py::arg("state"), py::arg("p"));
    m.def("lp_norm", [](const Mesh& mesh, const std::vector<double>& f, Domain dom, double p) {
        return lp_norm(mesh, f, dom, p);
    });

    py::class_<BlowupReport>(m, "BlowupReport")
        .def_readonly("growth_L4_V", &BlowupReport::growth_L4_V)
        .def_readonly("growth_L4_u", &BlowupReport::growth_L4_u)
        .def_readonly("V_exceeded", &BlowupReport::V_exceeded)
        .def_readonly("u_exceeded", &BlowupReport::u_exceeded)
        .def_readonly("concurrent", &BlowupReport::concurrent)
        .def_readonly("q4_log_rate", &BlowupReport::q4_log_rate)
        .def_readonly("one_norm_bounded", &BlowupReport::one_norm_bounded)
        .def("to_text", &BlowupReport::to_text);
    m.def("blowup_indicator",
          [](const std::vector<DiagnosticsRow>& h, double threshold) { return blowup_indicator(h, threshold); },
          py::arg("history"), py::arg("growth_threshold") = 10.0);

    py::class_<SteadyResiduals>(m, "SteadyResiduals")
        .def_readonly("V", &SteadyResiduals::V)
        .def_readonly("c", &SteadyResiduals::c)
        .def_readonly("u", &SteadyResiduals::u);
    py::class_<SteadyState>(m, "SteadyState")
        .def_readonly("V", &SteadyState::V)
        .def_readonly("c", &SteadyState::c)
        .def_readonly("u", &SteadyState::u)
        .def_readonly("mu", &SteadyState::mu)
        .def_readonly("total_mass", &SteadyState::total_mass)
        .def_readonly("residual", &SteadyState::residual)
        .def_readonly("iterations", &SteadyState::iterations)
        .def_readonly("converged", &SteadyState::converged)
        .def_readonly("damped", &SteadyState::damped)
        .def_readonly("max_mass_drift", &SteadyState::max_mass_drift)
        .def_readonly("u0", &SteadyState::u0);

    m.def("spherical_steady_state", &spherical_steady_state, py::arg("params"), py::arg("R"), py::arg("M_total"),
          py::arg("n"));
    m.def("spherical_steady_roots", &spherical_steady_roots, py::arg("params"), py::arg("R"), py::arg("M_total"),
          py::arg("n"));
    m.def("fixed_point_steady",
          [](const Mesh& mesh, const Parameters& p, double mu, double tol, int max_iters) {
              FixedPointOptions opts;
              opts.tol = tol;
              opts.max_iters = max_iters;
              return fixed_point_steady(mesh, p, mu, opts);
          },
          py::arg("mesh"), py::arg("params"), py::arg("mu"), py::arg("tol") = 1e-10, py::arg("max_iters") = 200);

    m.def("write_snapshot", &write_snapshot, py::arg("state"), py::arg("mesh"), py::arg("params"), py::arg("path"));
    m.def("read_snapshot", [](const std::filesystem::path& path) {
        auto snap = read_snapshot(path);
        return py::make_tuple(snap.state, snap.header.mesh(), snap.header.params);
    });
    m.def("write_diagnostics_csv",
          [](const std::vector<DiagnosticsRow>& rows, const std::filesystem::path& path, std::vector<double> ps) {
              write_diagnostics_csv(rows, path, ps);
          },
          py::arg("rows"), py::arg("path"), py::arg("p_values") = std::vector<double>{});
    m.def("read_diagnostics_csv", &read_diagnostics_csv);

    py::class_<RunConfig>(m, "RunConfig")
        .def_readwrite("scenario", &RunConfig::scenario)
        .def_readwrite("params", &RunConfig::params)
        .def_readwrite("stepper", &RunConfig::stepper)
        .def_readwrite("t_end", &RunConfig::t_end)
        .def_readwrite("output_dir", &RunConfig::output_dir)
        .def("build_mesh", [](const RunConfig& c) { return c.geometry.build(); })
        .def("initial_state", [](const RunConfig& c, const Mesh& mesh) { return make_initial_state(c, mesh); })
        .def("serialize", &serialize_config)
        .def("set", &set_config_value)
        .def(py::self == py::self);
    m.def("parse_config", &parse_config);
    m.def("load_config", &load_config);
    m.def("builtin_scenario", &builtin_scenario);
    m.def("builtin_scenario_names", &builtin_scenario_names);

    m.def("spherical_u0_reference", [] { return kSphericalU0DefaultMass1; });
}
