#pragma once

#include <string>
#include <vector>

#include "qsl/dynamics.hpp"
#include "qsl/norms.hpp"
#include "qsl/types.hpp"

namespace qsl {

enum class BoundForm { integral, supremum };

struct BoundSpec {
  double p = 2.0;  // in [1, ∞]
  WeightVector w;
  Matrix basis;  // unitary; columns define the representation basis
  BoundForm form = BoundForm::integral;
};

struct BoundResult {
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  MatchedWeights wbar;
  bool trivial = false;     // zero numerator
  bool degenerate = false;  // tie in moduli or weights
  bool truncated = false;   // tie-matching enumeration hit its cap
  double quadrature_residual = 0.0;
};

/// Composite Simpson over uniformly spaced samples (count must be odd,
/// i.e. an even number of intervals).
double simpson(const std::vector<double>& values, double dt);

/// Evaluates the basic integral/supremum bounds for one trajectory, caching
/// the basis-dependent Δ(τ) vector and the per-grid-point derivative moduli.
class BoundEvaluator {
 public:
  explicit BoundEvaluator(const Trajectory& traj);

  /// w̄ is fixed once from Δ(τ); on ties every admissible matching (cap 64)
  /// is evaluated and the maximum returned.  Asserts τ_int ≥ τ_sup and
  /// value ≤ τ + 1e−6 on every call.
  BoundResult evaluate(const BoundSpec& spec) const;

  const Trajectory& trajectory() const { return traj_; }

 private:
  struct BasisCache {
    Matrix basis;
    CVector delta;                 // vec_ℬ(ρ_τ − ρ₀)
    std::vector<RVector> moduli;   // |vec_ℬ(derivatives[k])| per grid point
  };
  const BasisCache& cache_for(const Matrix& basis) const;

  const Trajectory& traj_;
  mutable std::vector<BasisCache> caches_;
};

BoundResult qsl_bound(const Trajectory& traj, const BoundSpec& spec);

/// ħ·Θ_Bures(ρ₀, ρ_τ) / ⟨ΔE_t⟩, Simpson time average.
double mt_bound_closed(const Trajectory& traj,
                       const std::function<Matrix(double)>& h_of_t);

struct DlResult {
  double value = 0.0;
  std::string winning_norm;  // "op" | "tr" | "hs"
  double mt_open = 0.0;      // sin²Θ / Λ_hs
};

/// max(1/Λ^op, 1/Λ^tr, 1/Λ^hs)·sin²Θ with Λ the time-averaged Schatten
/// norms of 𝕃ρ_t.
DlResult dl_bound(const Trajectory& traj);

/// Q = 2‖[A₀, A_t]‖²_F
double quantumness(const Matrix& a0, const Matrix& at);

/// √Q(A₀, A_T) / (√2·⟨‖[A₀, 𝕃†A_t]‖_F⟩_T)
double t_q_bound(const Trajectory& traj, const Matrix& a0);

/// C = √(−Σ_k Tr([ρ, Π_k]²)) over eigenprojectors Π_k of a; equals
/// √(2 Σ_{j≠k} |ρ̃_jk|²) in a's eigenbasis.
double coherence(const Matrix& rho, const Matrix& a);

/// |√C(ρ_T) − √C(ρ₀)| / ⟨‖∂_t√ρ_t‖_F⟩_T, central finite differences of √ρ.
double t_c_bound(const Trajectory& traj, const Matrix& a);

}  // namespace qsl
