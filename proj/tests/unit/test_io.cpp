#include <doctest.h>

#include <filesystem>
#include <random>

#include "polaris/errors.hpp"
#include "polaris/io.hpp"

using namespace polaris;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "polaris_io_test";
  fs::create_directories(dir);
  return dir / name;
}
}  // namespace

TEST_CASE("diagnostics CSV") {
  const std::vector<double> ps{2.0, 4.0};
  CHECK(diagnostics_csv({}, ps) == diagnostics_csv_header(ps) + "\n");
  CHECK(diagnostics_csv_header(ps) ==
        "t,dt,M,Q_2,Q_4,L4_V,L4_u,L2_u,min_V,max_V,min_u,max_u,trace_L1_V,limiter_count");

  DiagnosticsRow zero;
  zero.p_values = ps;
  zero.Q = {0.0, 0.0};
  const std::vector<DiagnosticsRow> one{zero};
  CHECK(diagnostics_csv(one, ps) == diagnostics_csv_header(ps) + "\n0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1e3, 1e3);
  std::vector<DiagnosticsRow> rows;
  for (int i = 0; i < 50; ++i) {
    DiagnosticsRow r;
    r.t = dist(rng); r.dt = dist(rng); r.M = dist(rng);
    r.p_values = ps;
    r.Q = {dist(rng), dist(rng) * 1e-200};
    r.L4_V = dist(rng); r.L4_u = dist(rng); r.L2_u = dist(rng);
    r.min_V = dist(rng); r.max_V = dist(rng); r.min_u = dist(rng); r.max_u = dist(rng);
    r.trace_L1_V = dist(rng);
    r.limiter_count = static_cast<std::size_t>(i * 37);
    rows.push_back(r);
  }
  const auto path = scratch("diag.csv");
  write_diagnostics_csv(rows, path, ps);
  CHECK(read_diagnostics_csv(path) == rows);
  CHECK_THROWS_AS(parse_diagnostics_csv("t,dt\n1,2\n"), ParseError);
}

TEST_CASE("snapshot round trips") {
  const auto mesh = build_disk_mesh(1.5, 3, 7);
  Parameters p;
  p.exchange = ExchangeLaw::truncated(0.25);
  p.beta = 0.3;
  State zero{0.0, std::vector<double>(21, 0.0), std::vector<double>(7, 0.0), std::vector<double>(21, 0.0)};
  auto snap = parse_snapshot(snapshot_text(zero, mesh, p));
  CHECK(snap.state.V == zero.V);
  CHECK(snap.state.u == zero.u);
  CHECK(snap.state.c == zero.c);
  CHECK(snap.header.params == p);
  CHECK(snap.header.R == 1.5);
  CHECK(snap.header.mesh().num_cells() == 21);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  State s{0.123456789012345678, {}, {}, {}};
  for (int i = 0; i < 21; ++i) s.V.push_back(dist(rng) * 1e-300 + dist(rng));
  for (int i = 0; i < 7; ++i) s.u.push_back(dist(rng) / 3.0);
  for (int i = 0; i < 21; ++i) s.c.push_back(std::exp(40.0 * dist(rng)));
  const auto path = scratch("state.snapshot");
  write_snapshot(s, mesh, p, path);
  snap = read_snapshot(path);
  CHECK(snap.state.t == s.t);
  CHECK(snap.state.V == s.V);
  CHECK(snap.state.u == s.u);
  CHECK(snap.state.c == s.c);
  CHECK(read_text_file(path) == snapshot_text(s, mesh, p));
}

TEST_CASE("snapshot parse errors") {
  const auto mesh = build_radial_ball_mesh(1.0, 4);
  State s{0.0, {1, 2, 3, 4}, {5}, {6, 7, 8, 9}};
  const auto text = snapshot_text(s, mesh, Parameters{});
  const auto cut = text.substr(0, text.find("[c]")) + "[c] 4\n6 7 8\n";
  try {
    parse_snapshot(cut);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("[c]") != std::string::npos);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  auto versioned = text;
  versioned.replace(versioned.find("version = 1"), 11, "version = 9");
  CHECK_THROWS_AS(parse_snapshot(versioned), ParseError);
  CHECK_THROWS_AS(read_snapshot(scratch("missing.snapshot").string() + ".none"), IoError);
}

TEST_CASE("steady summary is deterministic") {
  SteadyState s;
  s.mu = 0.1;
  CHECK(steady_summary(s) == steady_summary(s));
  CHECK(steady_summary(s).find("mu = 0.10000000000000001") != std::string::npos);
}
