#include "polaris/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "polaris/diagnostics.hpp"
#include "polaris/errors.hpp"
#include "polaris/io.hpp"

namespace polaris {

Mesh GeometryConfig::build() const {
  return kind == GeometryKind::RadialBall ? build_radial_ball_mesh(R, n)
                                          : build_disk_mesh(R, nr, ntheta);
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_number(const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError("expected a number, got '" + v + "'");
  if (!std::isfinite(x)) throw ConfigError("expected a finite number, got '" + v + "'");
  return x;
}

std::size_t to_count(const std::string& v) {
  const double x = to_number(v);
  if (x < 0.0 || x != std::floor(x) || x > 1e15)
    throw ConfigError("expected a nonnegative integer, got '" + v + "'");
  return static_cast<std::size_t>(x);
}

double positive(const std::string& v, const char* what) {
  const double x = to_number(v);
  if (!(x > 0.0)) throw ConfigError(std::string(what) + " must be positive (got " + v + ")");
  return x;
}

double nonnegative(const std::string& v, const char* what) {
  const double x = to_number(v);
  if (!(x >= 0.0)) throw ConfigError(std::string(what) + " must be nonnegative (got " + v + ")");
  return x;
}

std::string join_p(const std::vector<double>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "," : "") + format_double(ps[i]);
  return s;
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define NUM_FIELD(sec, k, member, conv)                                                  \
  Field {                                                                                \
    sec, #k, [](RunConfig& c, const std::string& v) { c.member = conv(v, #k); },         \
        [](const RunConfig& c) { return format_double(c.member); }                       \
  }
#define COUNT_FIELD(sec, k, member)                                                      \
  Field {                                                                                \
    sec, #k, [](RunConfig& c, const std::string& v) { c.member = to_count(v); },         \
        [](const RunConfig& c) { return std::to_string(c.member); }                      \
  }

double any_number(const std::string& v, const char*) { return to_number(v); }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"scenario", "name", [](RunConfig& c, const std::string& v) { c.scenario = v; },
       [](const RunConfig& c) { return c.scenario; }},
      {"geometry", "kind",
       [](RunConfig& c, const std::string& v) {
         if (v == "radial_ball")
           c.geometry.kind = GeometryKind::RadialBall;
         else if (v == "disk")
           c.geometry.kind = GeometryKind::Disk;
         else
           throw ConfigError("geometry kind must be radial_ball or disk, got '" + v + "'");
       },
       [](const RunConfig& c) { return to_string(c.geometry.kind); }},
      NUM_FIELD("geometry", R, geometry.R, positive),
      COUNT_FIELD("geometry", n, geometry.n),
      COUNT_FIELD("geometry", nr, geometry.nr),
      COUNT_FIELD("geometry", ntheta, geometry.ntheta),
      NUM_FIELD("parameters", D, params.D, positive),
      NUM_FIELD("parameters", d, params.d, positive),
      NUM_FIELD("parameters", alpha, params.alpha, positive),
      NUM_FIELD("parameters", beta, params.beta, nonnegative),
      NUM_FIELD("parameters", k1, params.k1, positive),
      NUM_FIELD("parameters", k2, params.k2, positive),
      {"parameters", "exchange",
       [](RunConfig& c, const std::string& v) {
         if (v == "linear")
           c.params.exchange.kind = ExchangeLaw::Kind::Linear;
         else if (v == "truncated")
           c.params.exchange.kind = ExchangeLaw::Kind::Truncated;
         else
           throw ConfigError("exchange must be linear or truncated, got '" + v + "'");
       },
       [](const RunConfig& c) {
         return std::string(c.params.exchange.kind == ExchangeLaw::Kind::Linear ? "linear" : "truncated");
       }},
      NUM_FIELD("parameters", exchange_m, params.exchange.m, nonnegative),
      {"parameters", "source",
       [](RunConfig& c, const std::string& v) {
         if (v == "linear")
           c.params.source.kind = SourceLaw::Kind::Linear;
         else if (v == "truncated")
           c.params.source.kind = SourceLaw::Kind::Truncated;
         else
           throw ConfigError("source must be linear or truncated, got '" + v + "'");
       },
       [](const RunConfig& c) {
         return std::string(c.params.source.kind == SourceLaw::Kind::Linear ? "linear" : "truncated");
       }},
      NUM_FIELD("parameters", source_zmax, params.source.z_max, nonnegative),
      NUM_FIELD("stepper", dt_init, stepper.dt_init, positive),
      NUM_FIELD("stepper", dt_min, stepper.dt_min, positive),
      NUM_FIELD("stepper", dt_max, stepper.dt_max, positive),
      NUM_FIELD("stepper", grow, stepper.grow, positive),
      NUM_FIELD("stepper", shrink, stepper.shrink, positive),
      NUM_FIELD("stepper", linear_tol, stepper.linear_tol, positive),
      NUM_FIELD("stepper", blowup_factor, stepper.blowup_factor, positive),
      COUNT_FIELD("stepper", max_steps, stepper.max_steps),
      NUM_FIELD("stepper", max_relative_change, stepper.max_relative_change, positive),
      COUNT_FIELD("stepper", pinned_limit, stepper.pinned_limit),
      NUM_FIELD("stepper", t_end, t_end, nonnegative),
      {"initial", "kind",
       [](RunConfig& c, const std::string& v) {
         if (v == "constant")
           c.initial.kind = InitialConfig::Kind::Constant;
         else if (v == "gaussian")
           c.initial.kind = InitialConfig::Kind::Gaussian;
         else if (v == "snapshot")
           c.initial.kind = InitialConfig::Kind::Snapshot;
         else
           throw ConfigError("initial kind must be constant, gaussian or snapshot, got '" + v + "'");
       },
       [](const RunConfig& c) {
         switch (c.initial.kind) {
           case InitialConfig::Kind::Constant:
             return std::string("constant");
           case InitialConfig::Kind::Gaussian:
             return std::string("gaussian");
           default:
             return std::string("snapshot");
         }
       }},
      NUM_FIELD("initial", V_level, initial.V_level, nonnegative),
      NUM_FIELD("initial", u_level, initial.u_level, nonnegative),
      NUM_FIELD("initial", amplitude, initial.amplitude, nonnegative),
      NUM_FIELD("initial", width, initial.width, positive),
      NUM_FIELD("initial", center, initial.center, any_number),
      {"initial", "path", [](RunConfig& c, const std::string& v) { c.initial.path = v; },
       [](const RunConfig& c) { return c.initial.path; }},
      NUM_FIELD("initial", target_q2, initial.target_q2, nonnegative),
      COUNT_FIELD("diagnostics", cadence, diagnostics.cadence),
      {"diagnostics", "p_list",
       [](RunConfig& c, const std::string& v) {
         std::vector<double> ps;
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) {
           const double p = to_number(trim(item));
           if (!(p > 1.0)) throw ConfigError("p_list entries must exceed 1 (got " + trim(item) + ")");
           ps.push_back(p);
         }
         std::sort(ps.begin(), ps.end());
         ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
         c.diagnostics.p_list = ps;
       },
       [](const RunConfig& c) { return join_p(c.diagnostics.p_list); }},
      {"output", "dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; },
       [](const RunConfig& c) { return c.output_dir; }},
  };
  return table;
}

#undef NUM_FIELD
#undef COUNT_FIELD

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (section == f.section && key == f.key) return &f;
  return nullptr;
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  cfg.params.validate();
  cfg.stepper.validate();
  if (cfg.geometry.kind == GeometryKind::RadialBall && cfg.geometry.n == 0)
    throw ConfigError("geometry n must be at least 1");
  if (cfg.geometry.kind == GeometryKind::Disk && cfg.geometry.nr == 0)
    throw ConfigError("geometry nr must be at least 1");
  if (cfg.geometry.kind == GeometryKind::Disk && cfg.geometry.ntheta < 3)
    throw ConfigError("geometry ntheta must be at least 3");
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
  if (cfg.diagnostics.cadence == 0) throw ConfigError("diagnostics cadence must be at least 1");
  if (cfg.initial.kind == InitialConfig::Kind::Snapshot && cfg.initial.path.empty())
    throw ConfigError("initial kind snapshot requires a path");
  if (cfg.initial.V_level < 0 || cfg.initial.u_level < 0 || cfg.initial.amplitude < 0)
    throw ConfigError("initial data must be nonnegative");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, std::size_t> seen;  // "section.key" -> line
  std::istringstream is(text);
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  auto fail = [](std::size_t line, const std::string& msg) -> ConfigError {
    return ConfigError("line " + std::to_string(line) + ": " + msg);
  };
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw fail(lineno, "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& f : fields()) known = known || section == f.section;
      if (!known) throw fail(lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail(lineno, "expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw fail(lineno, "key '" + key + "' appears before any [section]");
    const Field* f = find_field(section, key);
    if (!f) throw fail(lineno, "unknown key '" + key + "' in [" + section + "]");
    const std::string id = section + "." + key;
    if (seen.count(id)) throw fail(lineno, "duplicate key '" + key + "' in [" + section + "]");
    seen[id] = lineno;
    try {
      f->set(cfg, value);
    } catch (const ConfigError& e) {
      throw fail(lineno, "[" + section + "] " + key + ": " + e.what());
    }
  }
  if (!seen.count("geometry.kind"))
    throw fail(lineno + 1, "missing required key 'kind' in [geometry]");
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    // point at the most relevant line we know of
    const std::string msg = e.what();
    std::size_t where = lineno;
    for (const auto& [id, ln] : seen) {
      const auto key = id.substr(id.find('.') + 1);
      if (msg.find(key) != std::string::npos) {
        where = ln;
        break;
      }
    }
    throw fail(where, msg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  try {
    return parse_config(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (section != f.section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

void set_config_value(RunConfig& cfg, const std::string& name, const std::string& value) {
  const auto dot = name.find('.');
  const Field* match = nullptr;
  if (dot != std::string::npos) {
    match = find_field(name.substr(0, dot), name.substr(dot + 1));
  } else {
    for (const auto& f : fields()) {
      if (name == f.key) {
        if (match) throw ConfigError("ambiguous parameter name '" + name + "'; use section.key");
        match = &f;
      }
    }
  }
  if (!match) throw ConfigError("unknown parameter '" + name + "'");
  match->set(cfg, value);
  validate_config(cfg);
}

State make_initial_state(const RunConfig& cfg, const Mesh& mesh) {
  State s;
  const auto& ic = cfg.initial;
  if (ic.kind == InitialConfig::Kind::Snapshot) {
    const auto snap = read_snapshot(ic.path);
    const auto& h = snap.header;
    if (h.kind != mesh.kind() || h.R != mesh.radius() || h.radial_cells != mesh.radial_cells() ||
        h.angular_cells != mesh.angular_cells())
      throw ConfigError("snapshot " + ic.path + " does not match the configured geometry");
    s = snap.state;
    s.t = 0.0;
    s.c.clear();
  } else {
    s.V.assign(mesh.num_cells(), ic.V_level);
    s.u.assign(mesh.num_nodes(), ic.u_level);
    if (ic.kind == InitialConfig::Kind::Gaussian) {
      for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
        double dth = std::remainder(mesh.surface_nodes()[i].theta - ic.center, 2.0 * std::numbers::pi);
        if (mesh.kind() == GeometryKind::RadialBall) dth = 0.0;
        s.u[i] += ic.amplitude * std::exp(-dth * dth / (2.0 * ic.width * ic.width));
      }
    }
  }
  if (!s.nonnegative()) throw ConfigError("initial data must be nonnegative");
  if (ic.target_q2 > 0.0) {
    const double q = q_p(mesh, cfg.params, s, 2.0);
    if (!(q > 0.0)) throw ConfigError("cannot rescale zero initial data to the target Q_2");
    const double f = std::sqrt(ic.target_q2 / q);
    for (auto& v : s.V) v *= f;
    for (auto& v : s.u) v *= f;
  }
  return s;
}

std::vector<std::string> builtin_scenario_names() {
  return {"small-data", "large-data", "reg-flux", "reg-source", "steady-validate", "beta-zero",
          "mass-disk"};
}

RunConfig builtin_scenario(const std::string& name) {
  RunConfig cfg;
  cfg.scenario = name;
  cfg.output_dir = "out/" + name;
  auto disk_bump = [&](double target_q2) {
    cfg.geometry = {GeometryKind::Disk, 1.0, 64, 16, 32};
    cfg.initial.kind = InitialConfig::Kind::Gaussian;
    cfg.initial.V_level = 0.2;
    cfg.initial.u_level = 0.0;
    cfg.initial.amplitude = 1.0;
    cfg.initial.width = 0.5;
    cfg.initial.center = 0.0;
    cfg.initial.target_q2 = target_q2;
  };
  cfg.diagnostics.cadence = 10;
  if (name == "small-data") {
    disk_bump(1e-3);
    cfg.t_end = 20.0;
    cfg.stepper.dt_max = 0.05;
  } else if (name == "large-data" || name == "reg-flux" || name == "reg-source") {
    disk_bump(100.0);
    cfg.t_end = 10.0;
    cfg.stepper.dt_max = 0.02;
    if (name == "reg-flux") cfg.params.exchange = ExchangeLaw::truncated(1.0);
    if (name == "reg-source") cfg.params.source = SourceLaw::truncated(1.0);
  } else if (name == "mass-disk") {
    disk_bump(0.0);
    cfg.initial.V_level = 0.5;
    cfg.initial.amplitude = 2.0;
    cfg.initial.width = 0.4;
    cfg.t_end = 5.0;
    cfg.stepper.dt_max = 5e-3;
  } else if (name == "steady-validate") {
    cfg.geometry = {GeometryKind::RadialBall, 1.0, 64, 16, 32};
    cfg.initial.kind = InitialConfig::Kind::Snapshot;
    cfg.initial.path = "out/steady-validate/steady_spherical.snapshot";
    cfg.t_end = 10.0;
    cfg.stepper.dt_max = 0.05;
  } else if (name == "beta-zero") {
    cfg.geometry = {GeometryKind::RadialBall, 1.0, 1, 16, 32};
    cfg.params.beta = 0.0;
    cfg.initial.kind = InitialConfig::Kind::Constant;
    cfg.initial.V_level = 1.0;
    cfg.initial.u_level = 0.0;
    cfg.t_end = 20.0;
    cfg.stepper.dt_max = 0.1;
    cfg.diagnostics.cadence = 1;
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  validate_config(cfg);
  return cfg;
}

}  // namespace polaris
