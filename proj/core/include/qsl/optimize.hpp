#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "qsl/bounds.hpp"
#include "qsl/dynamics.hpp"

namespace qsl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct OptimizeConfig {
  std::vector<double> p_grid = {1.0, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0, kInfinity};
  int basis_samples = 100;
  int hillclimb_iters = 2000;
  double hillclimb_step = 0.3;
  std::uint64_t seed = 0;
  BoundForm target_form = BoundForm::integral;
};

struct HistoryEntry {
  int iteration;
  double value;
};

struct OptimumReport {
  double best_value = 0.0;
  double best_p = 1.0;
  int best_w_index = 1;  // j in 1..n², meaning w = 𝟙_j
  Matrix best_basis;
  std::vector<HistoryEntry> history;
  int degenerate_optima_count = 0;
};

/// Exact w axis: n² evaluations over w = 𝟙_j; smallest j on ties.
std::pair<int, double> optimize_w(const BoundEvaluator& ev, double p,
                                  const Matrix& basis, BoundForm form);

/// Grid scan plus 20 golden-section refinements in the bracketing interval;
/// the ∞ endpoint is never refined.
std::pair<double, double> optimize_p(const BoundEvaluator& ev,
                                     const WeightVector& w,
                                     const Matrix& basis, BoundForm form,
                                     const std::vector<double>& p_grid);

struct BasisSearchResult {
  Matrix basis;
  double value = 0.0;
  std::vector<HistoryEntry> history;
};

/// Phase 1: canonical basis, the Δ(τ)-diagonalizing basis, and basis_samples
/// Haar draws.  Phase 2: hill climb U ← U·exp(εK); ε grows ×1.6 on
/// acceptance (cap 0.5), halves after 10 straight rejections, stops below
/// 1e−6 or at the iteration cap.
BasisSearchResult optimize_basis(const BoundEvaluator& ev, double p,
                                 const WeightVector& w, BoundForm form,
                                 const OptimizeConfig& cfg);

/// Basis sampling outermost, exact w scan innermost, p in between; the hill
/// climb perturbs the incumbent basis at its best (p, j).
OptimumReport optimize_full(const Trajectory& traj, const OptimizeConfig& cfg);

}  // namespace qsl
