#pragma once

#include <string>
#include <vector>

#include "qsl/types.hpp"

namespace qsl {

/// vec(U†MU) in entry-enumeration order (M₁₁, M₁₂, …, M_nn).
struct VectorizedOperator {
  CVector entries;
  std::string basis_tag;
};

/// Length-n² nonnegative weights stored descending.
class WeightVector {
 public:
  explicit WeightVector(RVector entries);

  /// 𝟙_j: j ones followed by zeros (j in 1..n²).
  static WeightVector indicator(int n2, int j);

  /// Rescaled so the leading entry is 1.
  WeightVector normalized() const;

  const RVector& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }

 private:
  RVector entries_;
};

/// The weight permutation realizing the arrow norm: assignment[k] is the
/// coordinate of x carrying the k-th largest weight.
struct MatchedWeights {
  std::vector<int> assignment;
  RVector weights;  // descending, aligned with assignment
  double value = 0.0;
  bool degenerate = false;

  /// Weights re-indexed by coordinate: out[assignment[k]] = weights[k].
  RVector by_coordinate() const;
};

VectorizedOperator vectorize(const Matrix& m, const Matrix& u,
                             std::string basis_tag = "");
Matrix devectorize(const VectorizedOperator& x);

/// Permutation-maximized weighted ℓp functional: pairs sorted weights with
/// sorted moduli. p = ∞ gives the largest modulus.
MatchedWeights arrow_norm(const CVector& x, const WeightVector& w, double p);

/// (Σ_j w̄_j |x_j|^p)^{1/p} with w̄ fixed by wbar.assignment (not re-sorted).
/// p = ∞ gives max{|x_j| : w̄_j > 0}.
double matched_seminorm(const CVector& x, const MatchedWeights& wbar, double p);

/// All matchings obtainable by permuting within modulus-tie blocks, capped at
/// max_candidates; truncated is set when the cap bites.
std::vector<MatchedWeights> enumerate_tie_matchings(const CVector& x,
                                                    const WeightVector& w,
                                                    double p,
                                                    int max_candidates,
                                                    bool* truncated = nullptr);

}  // namespace qsl
