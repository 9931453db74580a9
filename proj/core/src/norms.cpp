#include "qsl/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qsl {

WeightVector::WeightVector(RVector entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0)
    throw std::invalid_argument("WeightVector: empty");
  if ((entries_.array() < 0).any())
    throw std::invalid_argument("WeightVector: negative entry");
  std::sort(entries_.data(), entries_.data() + entries_.size(),
            std::greater<double>());
  if (entries_[0] <= 0)
    throw std::invalid_argument("WeightVector: all entries zero");
}

WeightVector WeightVector::indicator(int n2, int j) {
  if (j < 1 || j > n2)
    throw std::invalid_argument("WeightVector::indicator: index out of range");
  RVector w = RVector::Zero(n2);
  w.head(j).setOnes();
  return WeightVector(std::move(w));
}

WeightVector WeightVector::normalized() const {
  return WeightVector(entries_ / entries_[0]);
}

RVector MatchedWeights::by_coordinate() const {
  RVector out = RVector::Zero(weights.size());
  for (int k = 0; k < weights.size(); ++k) out[assignment[k]] = weights[k];
  return out;
}

VectorizedOperator vectorize(const Matrix& m, const Matrix& u,
                             std::string basis_tag) {
  require_square(m, "vectorize");
  require_same_dim(m, u, "vectorize");
  if (!is_unitary(u)) throw std::invalid_argument("vectorize: basis not unitary");
  const Matrix a = u.adjoint() * m * u;
  const int n = static_cast<int>(a.rows());
  CVector v(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v[i * n + j] = a(i, j);
  return {std::move(v), std::move(basis_tag)};
}

Matrix devectorize(const VectorizedOperator& x) {
  const int n2 = static_cast<int>(x.entries.size());
  const int n = static_cast<int>(std::lround(std::sqrt(double(n2))));
  if (n * n != n2)
    throw std::invalid_argument("devectorize: length not a perfect square");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = x.entries[i * n + j];
  return m;
}

namespace {

// Indices of x sorted by modulus descending; stable on exact ties.
std::vector<int> modulus_order(const RVector& mod) {
  std::vector<int> idx(mod.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return mod[a] > mod[b]; });
  return idx;
}

// Contiguous blocks of tied values in a descending sequence, relative
// tolerance kTieRelTol·(largest value).
std::vector<std::pair<int, int>> tie_blocks(const RVector& sorted_desc) {
  const double tol = kTieRelTol * std::max(1e-300, std::abs(sorted_desc[0]));
  std::vector<std::pair<int, int>> blocks;
  int start = 0;
  for (int k = 1; k <= sorted_desc.size(); ++k) {
    if (k == sorted_desc.size() || sorted_desc[start] - sorted_desc[k] > tol) {
      blocks.emplace_back(start, k);
      start = k;
    }
  }
  return blocks;
}

double weighted_lp(const RVector& w, const RVector& mod,
                   const std::vector<int>& assignment, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (int k = 0; k < w.size(); ++k)
      if (w[k] > 0) m = std::max(m, mod[assignment[k]]);
    return m;
  }
  double acc = 0.0;
  for (int k = 0; k < w.size(); ++k)
    if (w[k] > 0) acc += w[k] * std::pow(mod[assignment[k]], p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace

MatchedWeights arrow_norm(const CVector& x, const WeightVector& w, double p) {
  if (x.size() != w.size())
    throw std::invalid_argument("arrow_norm: length mismatch");
  if (p < 1.0) throw std::invalid_argument("arrow_norm: p < 1");
  const RVector mod = x.cwiseAbs();
  MatchedWeights out;
  out.assignment = modulus_order(mod);
  out.weights = w.entries();
  out.value = weighted_lp(out.weights, mod, out.assignment, p);

  // Degenerate when a modulus-tie block spans distinct weights: which tied
  // coordinate receives which weight then genuinely changes the matched
  // assignment.  Ties among weights alone are harmless — swapping equal
  // weights leaves the per-coordinate assignment unchanged.
  RVector sorted_mod(mod.size());
  for (int k = 0; k < mod.size(); ++k) sorted_mod[k] = mod[out.assignment[k]];
  const double wtol = kTieRelTol * std::max(1e-300, out.weights[0]);
  for (const auto& [lo, hi] : tie_blocks(sorted_mod)) {
    if (out.weights[lo] - out.weights[hi - 1] > wtol) out.degenerate = true;
  }
  return out;
}

double matched_seminorm(const CVector& x, const MatchedWeights& wbar,
                        double p) {
  if (static_cast<int>(wbar.assignment.size()) != x.size())
    throw std::invalid_argument("matched_seminorm: length mismatch");
  return weighted_lp(wbar.weights, x.cwiseAbs(), wbar.assignment, p);
}

std::vector<MatchedWeights> enumerate_tie_matchings(const CVector& x,
                                                    const WeightVector& w,
                                                    double p,
                                                    int max_candidates,
                                                    bool* truncated) {
  MatchedWeights base = arrow_norm(x, w, p);
  if (truncated) *truncated = false;
  if (!base.degenerate || max_candidates <= 1) return {base};

  const RVector mod = x.cwiseAbs();
  RVector sorted_mod(mod.size());
  for (int k = 0; k < mod.size(); ++k) sorted_mod[k] = mod[base.assignment[k]];

  // Permute coordinates inside each modulus-tie block; the weight slots
  // stay fixed, so each arrangement is a distinct matching.
  std::vector<std::pair<int, int>> blocks = tie_blocks(sorted_mod);
  std::vector<MatchedWeights> out;
  std::vector<std::vector<int>> block_perms(blocks.size());
  for (size_t b = 0; b < blocks.size(); ++b) {
    auto [lo, hi] = blocks[b];
    block_perms[b].assign(base.assignment.begin() + lo,
                          base.assignment.begin() + hi);
    std::sort(block_perms[b].begin(), block_perms[b].end());
  }

  // Depth-first over per-block permutations with a global cap.
  std::vector<std::vector<int>> chosen(blocks.size());
  bool cap_hit = false;
  std::function<void(size_t)> rec = [&](size_t b) {
    if (static_cast<int>(out.size()) >= max_candidates) {
      cap_hit = true;
      return;
    }
    if (b == blocks.size()) {
      MatchedWeights cand = base;
      for (size_t bb = 0; bb < blocks.size(); ++bb)
        std::copy(chosen[bb].begin(), chosen[bb].end(),
                  cand.assignment.begin() + blocks[bb].first);
      cand.value = weighted_lp(cand.weights, mod, cand.assignment, p);
      out.push_back(std::move(cand));
      return;
    }
    std::vector<int> perm = block_perms[b];
    do {
      chosen[b] = perm;
      rec(b + 1);
      if (cap_hit) return;
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  rec(0);
  if (truncated) *truncated = cap_hit;
  if (out.empty()) out.push_back(base);
  return out;
}

}  // namespace qsl
