#include "polaris/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polaris/errors.hpp"
#include "polaris/geometry.hpp"

namespace polaris {

ExchangeLaw ExchangeLaw::truncated(double bound) {
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw ConfigError("truncated exchange law: bound m must be positive and finite");
  return {Kind::Truncated, bound};
}

double ExchangeLaw::apply(double s) const {
  return kind == Kind::Linear ? s : m * std::tanh(s / m);
}

SourceLaw SourceLaw::truncated(double bound) {
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw ConfigError("truncated source law: bound z_max must be positive and finite");
  return {Kind::Truncated, bound};
}

double SourceLaw::apply(double beta, double u) const {
  return kind == Kind::Linear ? beta * u : z_max * std::tanh(beta * u / z_max);
}

void Parameters::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError(std::string("parameter ") + name + " must be positive (got " +
                        std::to_string(v) + ")");
  };
  positive(D, "D");
  positive(d, "d");
  positive(alpha, "alpha");
  positive(k1, "k1");
  positive(k2, "k2");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw ConfigError("parameter beta must be nonnegative (got " + std::to_string(beta) + ")");
  if (exchange.kind == ExchangeLaw::Kind::Truncated) positive(exchange.m, "exchange_m");
  if (source.kind == SourceLaw::Kind::Truncated) positive(source.z_max, "source_zmax");
}

void State::validate(const Mesh& mesh) const {
  if (V.size() != mesh.num_cells())
    throw ContractError("state: V has " + std::to_string(V.size()) + " entries, expected " +
                        std::to_string(mesh.num_cells()));
  if (u.size() != mesh.num_nodes())
    throw ContractError("state: u has " + std::to_string(u.size()) + " entries, expected " +
                        std::to_string(mesh.num_nodes()));
  if (!c.empty() && c.size() != mesh.num_cells())
    throw ContractError("state: c has " + std::to_string(c.size()) + " entries, expected " +
                        std::to_string(mesh.num_cells()));
  auto finite = [](const std::vector<double>& f) {
    return std::all_of(f.begin(), f.end(), [](double x) { return std::isfinite(x); });
  };
  if (!std::isfinite(t) || !finite(V) || !finite(u) || !finite(c))
    throw ContractError("state: non-finite entry");
}

bool State::nonnegative() const {
  auto nn = [](const std::vector<double>& f) {
    return std::all_of(f.begin(), f.end(), [](double x) { return x >= 0.0; });
  };
  return nn(V) && nn(u) && nn(c);
}

std::vector<double> exchange_flux(const ExchangeLaw& law, double k1, double k2,
                                  std::span<const double> V_trace, std::span<const double> u) {
  if (V_trace.size() != u.size()) throw ContractError("exchange_flux: field length mismatch");
  std::vector<double> q(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) q[i] = law.apply(k1 * V_trace[i] - k2 * u[i]);
  return q;
}

std::vector<double> c_boundary_source(const SourceLaw& law, double beta,
                                      std::span<const double> u) {
  std::vector<double> g(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) g[i] = law.apply(beta, u[i]);
  return g;
}

}  // namespace polaris
