#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qsl/types.hpp"

namespace qsl {

struct JumpOperator {
  Matrix op;
  double rate = 0.0;
};

enum class Picture { schrodinger, heisenberg };

struct GeneratorSpec {
  std::function<Matrix(double)> hamiltonian;  // may be empty (H = 0)
  std::vector<JumpOperator> jumps;
  Picture picture = Picture::schrodinger;
  double hbar = 1.0;
};

enum class TrajectorySource { analytic, integrated };

struct Trajectory {
  std::vector<double> times;  // uniform grid, t₀ = 0 … t_K = τ
  std::vector<Matrix> samples;
  std::vector<Matrix> derivatives;
  TrajectorySource source = TrajectorySource::integrated;
  GeneratorSpec generator;

  double tau() const { return times.back(); }
  int dim() const { return static_cast<int>(samples.front().rows()); }
};

/// −(i/ħ)[H(t), ρ] + Σ_m γ_m (L_m ρ L_m† − ½{L_m†L_m, ρ})
Matrix lindblad_rhs(const Matrix& rho, const GeneratorSpec& gen, double t);

/// +(i/ħ)[H(t), A] + Σ_m γ_m (L_m† A L_m − ½{L_m†L_m, A})
Matrix adjoint_rhs(const Matrix& a, const GeneratorSpec& gen, double t);

/// Dispatches on gen.picture.
Matrix apply_generator(const Matrix& m, const GeneratorSpec& gen, double t);

/// Classic RK4 on a uniform grid; the grid is doubled until the final-time
/// sample moves by < converge_tol in Frobenius norm (cap 2²⁰ steps).  Step
/// counts are rounded up to a multiple of 8 so Simpson quadrature and the
/// half-time control switch always land on grid points.
struct PropagateOptions {
  double converge_tol = 1e-9;
  long max_steps = 1 << 20;
};
Trajectory propagate(const GeneratorSpec& gen, const Matrix& initial,
                     double tau, int base_steps,
                     const PropagateOptions& opts = {});

enum class AnalyticModel {
  spontaneous_emission,   // param gamma
  dephasing_observable,   // param gamma; Heisenberg picture, A₀ = σ_y
  coherence_state,        // param gamma; ρ₀ = |0⟩⟨0|
  qubit_time_independent, // H = diag(0, 1), ψ₀ = (|E₀⟩+|E₁⟩)/√2
  qudit4,                 // energies {0, 1, π, 4}, amplitudes √{.2,.4,.3,.1}
};

/// Closed-form trajectory with derivatives from the matching generator
/// (exact closed-form derivatives where the generator is only an O(γ²)
/// approximation of the stated evolution).
Trajectory analytic_trajectory(AnalyticModel model,
                               const std::map<std::string, double>& params,
                               double tau, int grid_points);

}  // namespace qsl
