#include "qsl/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsl/random.hpp"
#include "qsl/spectral.hpp"

namespace qsl {

namespace {

constexpr double kGoldenRatio = 1.6180339887498949;
constexpr int kGoldenIters = 20;
constexpr double kStepGrowth = 1.6;
constexpr double kStepCap = 0.5;
constexpr double kStepFloor = 1e-6;
constexpr int kRejectionsPerHalving = 10;

double eval_at(const BoundEvaluator& ev, double p, const WeightVector& w,
               const Matrix& basis, BoundForm form) {
  return ev.evaluate({p, w, basis, form}).value;
}

/// Eigenbasis of the Hermitian part of Δ(τ).
Matrix delta_diag_basis(const Trajectory& traj) {
  const Matrix delta = traj.samples.back() - traj.samples.front();
  const Matrix herm = 0.5 * (delta + delta.adjoint());
  return hermitian_eig(herm).second;
}

std::pair<double, double> golden_refine(const BoundEvaluator& ev,
                                        const WeightVector& w,
                                        const Matrix& basis, BoundForm form,
                                        double a, double b, double best_p,
                                        double best_v) {
  double c = b - (b - a) / kGoldenRatio;
  double d = a + (b - a) / kGoldenRatio;
  double fc = eval_at(ev, c, w, basis, form);
  double fd = eval_at(ev, d, w, basis, form);
  for (int it = 0; it < kGoldenIters; ++it) {
    if (fc > best_v) { best_v = fc; best_p = c; }
    if (fd > best_v) { best_v = fd; best_p = d; }
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - (b - a) / kGoldenRatio;
      fc = eval_at(ev, c, w, basis, form);
    } else {
      a = c; c = d; fc = fd;
      d = a + (b - a) / kGoldenRatio;
      fd = eval_at(ev, d, w, basis, form);
    }
  }
  return {best_p, best_v};
}

}  // namespace

std::pair<int, double> optimize_w(const BoundEvaluator& ev, double p,
                                  const Matrix& basis, BoundForm form) {
  const int n2 = ev.trajectory().dim() * ev.trajectory().dim();
  int best_j = 1;
  double best_v = -1.0;
  for (int j = 1; j <= n2; ++j) {
    const double v =
        eval_at(ev, p, WeightVector::indicator(n2, j), basis, form);
    if (v > best_v) {
      best_v = v;
      best_j = j;
    }
  }
  return {best_j, best_v};
}

std::pair<double, double> optimize_p(const BoundEvaluator& ev,
                                     const WeightVector& w,
                                     const Matrix& basis, BoundForm form,
                                     const std::vector<double>& p_grid) {
  if (p_grid.empty()) throw std::invalid_argument("optimize_p: empty grid");
  std::vector<double> values;
  values.reserve(p_grid.size());
  for (double p : p_grid) values.push_back(eval_at(ev, p, w, basis, form));
  const size_t i = std::distance(
      values.begin(), std::max_element(values.begin(), values.end()));
  double best_p = p_grid[i];
  double best_v = values[i];
  if (std::isinf(best_p)) return {best_p, best_v};
  const double a = i > 0 ? p_grid[i - 1] : p_grid[i];
  const double b = (i + 1 < p_grid.size() && std::isfinite(p_grid[i + 1]))
                       ? p_grid[i + 1]
                       : p_grid[i];
  if (b > a) return golden_refine(ev, w, basis, form, a, b, best_p, best_v);
  return {best_p, best_v};
}

BasisSearchResult optimize_basis(const BoundEvaluator& ev, double p,
                                 const WeightVector& w, BoundForm form,
                                 const OptimizeConfig& cfg) {
  const int n = ev.trajectory().dim();
  std::mt19937_64 rng(cfg.seed);
  BasisSearchResult out;
  int iteration = 0;

  auto consider = [&](const Matrix& u) {
    const double v = eval_at(ev, p, w, u, form);
    if (out.basis.size() == 0 || v > out.value) {
      out.basis = u;
      out.value = v;
      out.history.push_back({iteration, v});
    }
    ++iteration;
  };

  consider(Matrix::Identity(n, n));
  consider(delta_diag_basis(ev.trajectory()));
  for (int s = 0; s < cfg.basis_samples; ++s) consider(haar_unitary(n, rng));

  double eps = cfg.hillclimb_step;
  int rejections = 0;
  for (int it = 0; it < cfg.hillclimb_iters && eps >= kStepFloor; ++it) {
    const Matrix k = random_antihermitian(n, rng);
    const Matrix cand = out.basis * unitary_exp(k, eps);
    const double v = eval_at(ev, p, w, cand, form);
    if (v > out.value) {
      out.basis = cand;
      out.value = v;
      out.history.push_back({iteration, v});
      eps = std::min(eps * kStepGrowth, kStepCap);
      rejections = 0;
    } else if (++rejections >= kRejectionsPerHalving) {
      eps /= 2.0;
      rejections = 0;
    }
    ++iteration;
  }
  return out;
}

OptimumReport optimize_full(const Trajectory& traj, const OptimizeConfig& cfg) {
  if (cfg.basis_samples < 1)
    throw std::invalid_argument("optimize_full: basis_samples < 1");
  for (double p : {1.0, 2.0})
    if (std::find(cfg.p_grid.begin(), cfg.p_grid.end(), p) == cfg.p_grid.end())
      throw std::invalid_argument("optimize_full: p_grid must contain 1 and 2");

  BoundEvaluator ev(traj);
  const int n = traj.dim();
  const int n2 = n * n;
  std::mt19937_64 rng(cfg.seed);

  OptimumReport report;
  report.best_value = -1.0;
  int iteration = 0;
  const double tie_tol = 1e-10;

  auto scan_basis = [&](const Matrix& u) {
    for (double p : cfg.p_grid) {
      for (int j = 1; j <= n2; ++j) {
        const double v =
            eval_at(ev, p, WeightVector::indicator(n2, j), u, cfg.target_form);
        if (v > report.best_value * (1.0 + tie_tol)) {
          report.best_value = v;
          report.best_p = p;
          report.best_w_index = j;
          report.best_basis = u;
          report.degenerate_optima_count = 0;
          report.history.push_back({iteration, v});
        } else if (v >= report.best_value * (1.0 - tie_tol)) {
          ++report.degenerate_optima_count;
        }
        ++iteration;
      }
    }
  };

  scan_basis(Matrix::Identity(n, n));
  scan_basis(delta_diag_basis(traj));
  for (int s = 0; s < cfg.basis_samples; ++s) scan_basis(haar_unitary(n, rng));

  // Golden-section sharpening of p at the incumbent (basis, j).
  {
    const WeightVector w = WeightVector::indicator(n2, report.best_w_index);
    auto [p, v] =
        optimize_p(ev, w, report.best_basis, cfg.target_form, cfg.p_grid);
    if (v > report.best_value) {
      report.best_value = v;
      report.best_p = p;
      report.history.push_back({iteration, v});
    }
    ++iteration;
  }

  // Hill climb on the basis at the incumbent (p, j).
  {
    const WeightVector w = WeightVector::indicator(n2, report.best_w_index);
    double eps = cfg.hillclimb_step;
    int rejections = 0;
    for (int it = 0; it < cfg.hillclimb_iters && eps >= kStepFloor; ++it) {
      const Matrix k = random_antihermitian(n, rng);
      const Matrix cand = report.best_basis * unitary_exp(k, eps);
      const double v =
          eval_at(ev, report.best_p, w, cand, cfg.target_form);
      if (v > report.best_value) {
        report.best_value = v;
        report.best_basis = cand;
        report.history.push_back({iteration, v});
        eps = std::min(eps * kStepGrowth, kStepCap);
        rejections = 0;
      } else if (++rejections >= kRejectionsPerHalving) {
        eps /= 2.0;
        rejections = 0;
      }
      ++iteration;
    }
  }
  return report;
}

}  // namespace qsl
