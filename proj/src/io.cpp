#include "polaris/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "polaris/errors.hpp"

namespace polaris {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string p_label(double p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "Q_%g", p);
  return buf;
}

constexpr const char* kTailColumns[] = {"L4_V",  "L4_u",  "L2_u",  "min_V",      "max_V",
                                        "min_u", "max_u", "trace_L1_V", "limiter_count"};

double parse_number(const std::string& tok, const std::string& context) {
  if (tok.empty()) throw ParseError(context + ": empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) throw ParseError(context + ": not a number: '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string diagnostics_csv_header(std::span<const double> p_values) {
  std::string h = "t,dt,M";
  for (double p : p_values) h += "," + p_label(p);
  for (const char* c : kTailColumns) h += std::string(",") + c;
  return h;
}

std::string diagnostics_csv(std::span<const DiagnosticsRow> rows, std::span<const double> p_values) {
  std::vector<double> ps = rows.empty() ? std::vector<double>(p_values.begin(), p_values.end())
                                        : rows.front().p_values;
  std::string out = diagnostics_csv_header(ps) + "\n";
  for (const auto& r : rows) {
    if (r.p_values != ps) throw ContractError("write_diagnostics_csv: rows disagree on the Q_p column set");
    out += format_double(r.t) + "," + format_double(r.dt) + "," + format_double(r.M);
    for (double q : r.Q) out += "," + format_double(q);
    for (double v : {r.L4_V, r.L4_u, r.L2_u, r.min_V, r.max_V, r.min_u, r.max_u, r.trace_L1_V})
      out += "," + format_double(v);
    out += "," + std::to_string(r.limiter_count) + "\n";
  }
  return out;
}

void write_diagnostics_csv(std::span<const DiagnosticsRow> rows, const std::filesystem::path& path,
                           std::span<const double> p_values) {
  write_text_file(path, diagnostics_csv(rows, p_values));
}

std::vector<DiagnosticsRow> parse_diagnostics_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ParseError("diagnostics csv: missing header");
  const auto cols = split(line, ',');
  constexpr std::size_t kTail = std::size(kTailColumns);
  if (cols.size() < 3 + kTail || cols[0] != "t" || cols[1] != "dt" || cols[2] != "M")
    throw ParseError("diagnostics csv: unexpected header '" + line + "'");
  const std::size_t nq = cols.size() - 3 - kTail;
  std::vector<double> ps;
  for (std::size_t i = 0; i < nq; ++i) {
    if (cols[3 + i].rfind("Q_", 0) != 0) throw ParseError("diagnostics csv: bad column " + cols[3 + i]);
    ps.push_back(parse_number(cols[3 + i].substr(2), "diagnostics csv header"));
  }
  for (std::size_t i = 0; i < kTail; ++i)
    if (cols[3 + nq + i] != kTailColumns[i])
      throw ParseError("diagnostics csv: expected column " + std::string(kTailColumns[i]));

  std::vector<DiagnosticsRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    const std::string ctx = "diagnostics csv line " + std::to_string(lineno);
    if (f.size() != cols.size()) throw ParseError(ctx + ": wrong field count");
    DiagnosticsRow r;
    r.t = parse_number(f[0], ctx);
    r.dt = parse_number(f[1], ctx);
    r.M = parse_number(f[2], ctx);
    r.p_values = ps;
    for (std::size_t i = 0; i < nq; ++i) r.Q.push_back(parse_number(f[3 + i], ctx));
    double* tail[] = {&r.L4_V, &r.L4_u, &r.L2_u, &r.min_V, &r.max_V, &r.min_u, &r.max_u, &r.trace_L1_V};
    for (std::size_t i = 0; i < 8; ++i) *tail[i] = parse_number(f[3 + nq + i], ctx);
    r.limiter_count = static_cast<std::size_t>(std::stoull(f.back()));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<DiagnosticsRow> read_diagnostics_csv(const std::filesystem::path& path) {
  return parse_diagnostics_csv(read_text_file(path));
}

// ---------------------------------------------------------------------------
// snapshots

Mesh SnapshotHeader::mesh() const {
  return kind == GeometryKind::RadialBall ? build_radial_ball_mesh(R, radial_cells)
                                          : build_disk_mesh(R, radial_cells, angular_cells);
}

std::string snapshot_text(const State& state, const Mesh& mesh, const Parameters& params) {
  state.validate(mesh);
  std::ostringstream os;
  os << "polaris-snapshot\n"
     << "version = " << kSnapshotVersion << '\n'
     << "geometry = " << to_string(mesh.kind()) << '\n'
     << "R = " << format_double(mesh.radius()) << '\n'
     << "radial_cells = " << mesh.radial_cells() << '\n'
     << "angular_cells = " << mesh.angular_cells() << '\n'
     << "t = " << format_double(state.t) << '\n'
     << "D = " << format_double(params.D) << '\n'
     << "d = " << format_double(params.d) << '\n'
     << "alpha = " << format_double(params.alpha) << '\n'
     << "beta = " << format_double(params.beta) << '\n'
     << "k1 = " << format_double(params.k1) << '\n'
     << "k2 = " << format_double(params.k2) << '\n'
     << "exchange = " << (params.exchange.kind == ExchangeLaw::Kind::Linear ? "linear" : "truncated") << '\n'
     << "exchange_m = " << format_double(params.exchange.m) << '\n'
     << "source = " << (params.source.kind == SourceLaw::Kind::Linear ? "linear" : "truncated") << '\n'
     << "source_zmax = " << format_double(params.source.z_max) << '\n'
     << "end_header\n";
  std::vector<double> c = state.c;
  if (c.empty()) c.assign(mesh.num_cells(), 0.0);
  auto section = [&](const char* name, const std::vector<double>& f) {
    os << '[' << name << "] " << f.size() << '\n';
    for (double v : f) os << format_double(v) << '\n';
  };
  section("V", state.V);
  section("u", state.u);
  section("c", c);
  return os.str();
}

void write_snapshot(const State& state, const Mesh& mesh, const Parameters& params,
                    const std::filesystem::path& path) {
  write_text_file(path, snapshot_text(state, mesh, params));
}

namespace {

/// Line cursor that remembers byte offsets for error messages.
class Cursor {
 public:
  explicit Cursor(const std::string& text) : text_(text) {}
  bool next(std::string& line) {
    if (pos_ >= text_.size()) return false;
    line_start_ = pos_;
    const auto nl = text_.find('\n', pos_);
    const auto end = nl == std::string::npos ? text_.size() : nl;
    line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos_ = nl == std::string::npos ? text_.size() : nl + 1;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("snapshot: " + msg + " (byte offset " + std::to_string(line_start_) + ")");
  }
  std::size_t offset() const { return line_start_; }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

Snapshot parse_snapshot(const std::string& text) {
  Cursor cur(text);
  std::string line;
  if (!cur.next(line) || trim(line) != "polaris-snapshot") cur.fail("missing 'polaris-snapshot' magic line");

  Snapshot snap;
  auto& h = snap.header;
  bool have_version = false;
  std::string exchange = "linear", source = "linear";
  double exchange_m = 0.0, source_zmax = 0.0;
  std::string geometry;
  bool ended = false;
  while (cur.next(line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line == "end_header") {
      ended = true;
      break;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) cur.fail("expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    auto num = [&] {
      try {
        return parse_number(val, key);
      } catch (const ParseError& e) {
        cur.fail(e.what());
      }
    };
    if (key == "version") {
      h.version = static_cast<int>(num());
      have_version = true;
      if (h.version != kSnapshotVersion)
        cur.fail("unsupported format version " + val + " (expected " + std::to_string(kSnapshotVersion) + ")");
    } else if (key == "geometry") {
      geometry = val;
    } else if (key == "R") {
      h.R = num();
    } else if (key == "radial_cells") {
      h.radial_cells = static_cast<std::size_t>(num());
    } else if (key == "angular_cells") {
      h.angular_cells = static_cast<std::size_t>(num());
    } else if (key == "t") {
      h.t = num();
    } else if (key == "D") {
      h.params.D = num();
    } else if (key == "d") {
      h.params.d = num();
    } else if (key == "alpha") {
      h.params.alpha = num();
    } else if (key == "beta") {
      h.params.beta = num();
    } else if (key == "k1") {
      h.params.k1 = num();
    } else if (key == "k2") {
      h.params.k2 = num();
    } else if (key == "exchange") {
      exchange = val;
    } else if (key == "exchange_m") {
      exchange_m = num();
    } else if (key == "source") {
      source = val;
    } else if (key == "source_zmax") {
      source_zmax = num();
    } else {
      cur.fail("unknown header key '" + key + "'");
    }
  }
  if (!ended) cur.fail("header not terminated by end_header");
  if (!have_version) cur.fail("missing version");
  if (geometry == "radial_ball")
    h.kind = GeometryKind::RadialBall;
  else if (geometry == "disk")
    h.kind = GeometryKind::Disk;
  else
    cur.fail("unknown geometry '" + geometry + "'");
  try {
    h.params.exchange = exchange == "linear" ? ExchangeLaw::linear() : ExchangeLaw::truncated(exchange_m);
    h.params.source = source == "linear" ? SourceLaw::linear() : SourceLaw::truncated(source_zmax);
  } catch (const ConfigError& e) {
    cur.fail(e.what());
  }
  const std::size_t ncells = h.radial_cells * (h.kind == GeometryKind::Disk ? h.angular_cells : 1);
  const std::size_t nnodes = h.kind == GeometryKind::Disk ? h.angular_cells : 1;

  auto read_section = [&](const char* name, std::size_t expected, std::vector<double>& out) {
    std::string hdr;
    do {
      if (!cur.next(hdr)) cur.fail(std::string("missing section [") + name + "]");
      hdr = trim(hdr);
    } while (hdr.empty());
    const std::string tag = std::string("[") + name + "]";
    if (hdr.rfind(tag, 0) != 0) cur.fail(std::string("expected section ") + tag + ", got '" + hdr + "'");
    const auto count_text = trim(hdr.substr(tag.size()));
    std::size_t count = 0;
    try {
      count = static_cast<std::size_t>(parse_number(count_text, tag));
    } catch (const ParseError& e) {
      cur.fail(e.what());
    }
    if (count != expected)
      cur.fail("section " + tag + " declares " + std::to_string(count) + " values but the header implies " +
               std::to_string(expected));
    out.clear();
    out.reserve(count);
    std::string v;
    while (out.size() < count) {
      if (!cur.next(v))
        throw ParseError("snapshot: section " + tag + " is short: " + std::to_string(out.size()) + " of " +
                         std::to_string(count) + " values before end of file (byte offset " +
                         std::to_string(text.size()) + ")");
      v = trim(v);
      if (v.empty()) continue;
      if (v.front() == '[')
        cur.fail("section " + tag + " is short: " + std::to_string(out.size()) + " of " +
                 std::to_string(count) + " values");
      try {
        out.push_back(parse_number(v, tag));
      } catch (const ParseError& e) {
        cur.fail(e.what());
      }
    }
  };
  read_section("V", ncells, snap.state.V);
  read_section("u", nnodes, snap.state.u);
  read_section("c", ncells, snap.state.c);
  while (cur.next(line))
    if (!trim(line).empty()) cur.fail("trailing content after [c] section");
  snap.state.t = h.t;
  return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  try {
    return parse_snapshot(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string steady_summary(const SteadyState& s) {
  std::ostringstream os;
  os << "mu = " << format_double(s.mu) << '\n'
     << "total_mass = " << format_double(s.total_mass) << '\n'
     << "u0 = " << format_double(s.u0) << '\n'
     << "residual_V = " << format_double(s.residual.V) << '\n'
     << "residual_c = " << format_double(s.residual.c) << '\n'
     << "residual_u = " << format_double(s.residual.u) << '\n'
     << "iterations = " << s.iterations << '\n'
     << "converged = " << (s.converged ? "true" : "false") << '\n'
     << "damped = " << (s.damped ? "true" : "false") << '\n'
     << "max_mass_drift = " << format_double(s.max_mass_drift) << '\n';
  return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace polaris
