#include <doctest.h>

#include <algorithm>

#include "polaris/config.hpp"
#include "polaris/diagnostics.hpp"
#include "polaris/errors.hpp"

using namespace polaris;

namespace {
std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}
}  // namespace

TEST_CASE("minimal config takes documented defaults") {
  const auto cfg = parse_config("[geometry]\nkind = disk\n");
  CHECK(cfg.geometry.kind == GeometryKind::Disk);
  CHECK(cfg.geometry.nr == 16);
  CHECK(cfg.geometry.ntheta == 32);
  CHECK(cfg.params == Parameters{});
  CHECK(cfg.stepper == StepperConfig{});
  CHECK(cfg.initial.kind == InitialConfig::Kind::Constant);
  CHECK(cfg.diagnostics.p_list == std::vector<double>{2.0, 4.0});
}

TEST_CASE("config errors carry line numbers") {
  const auto neg = error_of("[geometry]\nkind = disk\n[parameters]\nD = -1\n");
  CHECK(neg.find("line 4") != std::string::npos);
  CHECK(neg.find("positive") != std::string::npos);
  CHECK(error_of("[geometry]\nkind = disk\nbogus = 1\n").find("line 3") != std::string::npos);
  CHECK(error_of("[geometry]\nkind = disk\nnr = many\n").find("line 3") != std::string::npos);
  CHECK_FALSE(error_of("[nowhere]\n").empty());
  CHECK_FALSE(error_of("[parameters]\nD = 1\n").empty());
}

TEST_CASE("serialize then parse is the identity") {
  for (const auto& name : builtin_scenario_names()) {
    const auto cfg = builtin_scenario(name);
    const auto text = serialize_config(cfg);
    const auto back = parse_config(text);
    CHECK(back == cfg);
    CHECK(serialize_config(back) == text);
  }
  CHECK_THROWS_AS(builtin_scenario("no-such-scenario"), ConfigError);
}

TEST_CASE("shipped scenarios") {
  const auto names = builtin_scenario_names();
  for (const char* want : {"small-data", "large-data", "reg-flux", "reg-source", "steady-validate", "beta-zero"})
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  CHECK(builtin_scenario("reg-flux").params.exchange.kind == ExchangeLaw::Kind::Truncated);
  CHECK(builtin_scenario("reg-source").params.source.kind == SourceLaw::Kind::Truncated);
  CHECK(builtin_scenario("beta-zero").params.beta == 0.0);
}

TEST_CASE("initial data") {
  auto cfg = builtin_scenario("small-data");
  const auto mesh = cfg.geometry.build();
  const auto s = make_initial_state(cfg, mesh);
  CHECK(s.nonnegative());
  CHECK(q_p(mesh, cfg.params, s, 2.0) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(s.c.empty());

  cfg.initial.kind = InitialConfig::Kind::Constant;
  cfg.initial.target_q2 = 0.0;
  cfg.initial.V_level = 2.0;
  cfg.initial.u_level = 0.5;
  const auto c = make_initial_state(cfg, mesh);
  CHECK(std::all_of(c.V.begin(), c.V.end(), [](double v) { return v == 2.0; }));
  CHECK(std::all_of(c.u.begin(), c.u.end(), [](double v) { return v == 0.5; }));
}

TEST_CASE("sweep overrides") {
  auto cfg = builtin_scenario("small-data");
  set_config_value(cfg, "beta", "0.25");
  CHECK(cfg.params.beta == 0.25);
  set_config_value(cfg, "parameters.k1", "3");
  CHECK(cfg.params.k1 == 3.0);
  set_config_value(cfg, "geometry.nr", "8");
  CHECK(cfg.geometry.nr == 8);
  CHECK_THROWS_AS(set_config_value(cfg, "nonsense", "1"), ConfigError);
  CHECK_THROWS_AS(set_config_value(cfg, "D", "-2"), ConfigError);
}
