#include "qsl/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsl {

ScenarioId scenario_from_name(const std::string& name) {
  if (name == "qubit_ti") return ScenarioId::qubit_ti;
  if (name == "qudit4") return ScenarioId::qudit4;
  if (name == "spont_emission") return ScenarioId::spont_emission;
  if (name == "nv_center") return ScenarioId::nv_center;
  if (name == "dephasing") return ScenarioId::dephasing;
  if (name == "coherence_gen") return ScenarioId::coherence_gen;
  throw std::invalid_argument("unknown scenario: " + name);
}

std::string scenario_name(ScenarioId id) {
  switch (id) {
    case ScenarioId::qubit_ti: return "qubit_ti";
    case ScenarioId::qudit4: return "qudit4";
    case ScenarioId::spont_emission: return "spont_emission";
    case ScenarioId::nv_center: return "nv_center";
    case ScenarioId::dephasing: return "dephasing";
    case ScenarioId::coherence_gen: return "coherence_gen";
  }
  throw std::invalid_argument("unknown scenario id");
}

namespace {

double require_param(const ScenarioConfig& cfg, const std::string& key) {
  auto it = cfg.params.find(key);
  if (it == cfg.params.end() || !std::isfinite(it->second))
    throw std::invalid_argument(scenario_name(cfg.id) +
                                ": missing or non-finite parameter '" + key +
                                "'");
  return it->second;
}

double param_or(const ScenarioConfig& cfg, const std::string& key,
                double fallback) {
  auto it = cfg.params.find(key);
  if (it == cfg.params.end()) return fallback;
  if (!std::isfinite(it->second))
    throw std::invalid_argument(scenario_name(cfg.id) +
                                ": non-finite parameter '" + key + "'");
  return it->second;
}

}  // namespace

Scenario build_scenario(const ScenarioConfig& cfg) {
  Scenario sc;
  sc.id = cfg.id;
  const double tau = require_param(cfg, "tau");
  if (tau <= 0)
    throw std::invalid_argument(scenario_name(cfg.id) + ": tau must be > 0");
  if (cfg.grid_points < 64)
    throw std::invalid_argument(scenario_name(cfg.id) + ": grid_points < 64");

  switch (cfg.id) {
    case ScenarioId::qubit_ti: {
      sc.trajectory = analytic_trajectory(AnalyticModel::qubit_time_independent,
                                          {}, tau, cfg.grid_points);
      sc.comparisons = {Comparison::mt};
      sc.fidelity = [](double t) { return std::abs(std::cos(t / 2.0)); };
      break;
    }
    case ScenarioId::qudit4: {
      sc.trajectory = analytic_trajectory(AnalyticModel::qudit4, {}, tau,
                                          cfg.grid_points);
      sc.comparisons = {Comparison::mt};
      sc.fidelity = [](double t) {
        const Complex i(0, 1);
        return std::abs(0.2 + 0.4 * std::exp(-i * t) +
                        0.3 * std::exp(-i * kPi * t) +
                        0.1 * std::exp(-i * 4.0 * t));
      };
      break;
    }
    case ScenarioId::spont_emission: {
      const double g = param_or(cfg, "gamma", 1.0);
      if (g <= 0)
        throw std::invalid_argument("spont_emission: gamma must be > 0");
      sc.trajectory = analytic_trajectory(AnalyticModel::spontaneous_emission,
                                          {{"gamma", g}}, tau, cfg.grid_points);
      sc.comparisons = {Comparison::dl, Comparison::mt_open};
      // √⟨ψ₀|ρ_t|ψ₀⟩ in closed form.
      sc.fidelity = [g](double t) {
        return std::sqrt((1.0 + std::exp(-g * t / 2.0)) / 2.0);
      };
      break;
    }
    case ScenarioId::nv_center: {
      const double d = param_or(cfg, "D", kNvD);
      const double ge = param_or(cfg, "gamma_e", kNvGammaE);
      const double b0 = param_or(cfg, "B0", kNvB0);
      const double b1 = require_param(cfg, "B1");
      GeneratorSpec gen;
      const Matrix sx = spin1_x(), sy = spin1_y(), sz = spin1_z();
      const Matrix h0 = d * sz * sz + ge * b0 * sz;
      gen.hamiltonian = [h0, ge, b1, sx, sy, tau](double t) {
        return Matrix(h0 + ge * b1 * (t < tau / 2.0 ? sx : sy));
      };
      CVector psi0 = CVector::Zero(3);
      psi0[0] = 1.0;  // |m_s = +1⟩
      sc.trajectory =
          propagate(gen, psi0 * psi0.adjoint(), tau, cfg.grid_points);
      sc.comparisons = {Comparison::mt};
      break;
    }
    case ScenarioId::dephasing: {
      const double g = param_or(cfg, "gamma", 1.0);
      sc.trajectory = analytic_trajectory(AnalyticModel::dephasing_observable,
                                          {{"gamma", g}}, tau, cfg.grid_points);
      sc.comparisons = {Comparison::tq};
      break;
    }
    case ScenarioId::coherence_gen: {
      const double g = param_or(cfg, "gamma", 1.0);
      sc.trajectory = analytic_trajectory(AnalyticModel::coherence_state,
                                          {{"gamma", g}}, tau, cfg.grid_points);
      sc.comparisons = {Comparison::tc};
      sc.coherence_observable = pauli_z();
      break;
    }
  }
  sc.initial = sc.trajectory.samples.front();
  return sc;
}

std::map<std::string, double> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::map<std::string, double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": empty key or value");
    try {
      size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      out[key] = v;
    } catch (const std::exception&) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": cannot parse number '" + value + "'");
    }
  }
  return out;
}

}  // namespace qsl
