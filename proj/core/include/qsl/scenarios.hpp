#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsl/dynamics.hpp"
#include "qsl/types.hpp"

namespace qsl {

enum class ScenarioId {
  qubit_ti,
  qudit4,
  spont_emission,
  nv_center,
  dephasing,
  coherence_gen,
};

ScenarioId scenario_from_name(const std::string& name);
std::string scenario_name(ScenarioId id);

/// τ where the 4-level example first saturates its basic bound.
inline constexpr double kQuditCriticalTau = 3.43;

inline constexpr double kNvD = 2.0 * kPi * 2.87;          // rad/ns
inline constexpr double kNvGammaE = 2.0 * kPi * 28.0345;  // rad/(ns·T)
inline constexpr double kNvB0 = 0.05;                     // T

struct ScenarioConfig {
  ScenarioId id = ScenarioId::qubit_ti;
  std::map<std::string, double> params;  // gamma, tau, B0, B1, D, gamma_e
  int grid_points = 512;
  std::uint64_t seed = 0;
};

/// Which comparison bounds apply to a scenario.
enum class Comparison { mt, dl, mt_open, tq, tc };

struct Scenario {
  ScenarioId id;
  Trajectory trajectory;
  std::vector<Comparison> comparisons;
  Matrix initial;                         // ρ₀ or A₀
  Matrix coherence_observable;            // for tc (σ_z); empty otherwise
  std::function<double(double)> fidelity; // analytic |⟨ψ₀|ψ_t⟩|, if any
};

Scenario build_scenario(const ScenarioConfig& cfg);

/// Plain-text key = value file, # comments, blank lines ignored.
std::map<std::string, double> parse_config_file(const std::string& path);

}  // namespace qsl
