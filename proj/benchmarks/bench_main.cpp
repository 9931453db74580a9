#include <random>

#include <benchmark/benchmark.h>

#include "qsl/bounds.hpp"
#include "qsl/dynamics.hpp"
#include "qsl/norms.hpp"
#include "qsl/optimize.hpp"
#include "qsl/random.hpp"

namespace {

using namespace qsl;

void bench_arrow_norm(benchmark::State& state) {
  const int n2 = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni(0, 1);
  CVector x(n2);
  for (int i = 0; i < n2; ++i) x[i] = Complex(gauss(rng), gauss(rng));
  RVector wr(n2);
  for (int i = 0; i < n2; ++i) wr[i] = uni(rng);
  wr[0] = 1.0;
  const WeightVector w(wr);
  for (auto _ : state)
    benchmark::DoNotOptimize(arrow_norm(x, w, 2.5).value);
}
BENCHMARK(bench_arrow_norm)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

Trajectory decay_traj(int grid) {
  return analytic_trajectory(AnalyticModel::spontaneous_emission,
                             {{"gamma", 1.0}}, 1.0, grid);
}

void bench_bound_eval(benchmark::State& state) {
  const auto traj = decay_traj(static_cast<int>(state.range(0)));
  BoundEvaluator ev(traj);
  std::mt19937_64 rng(11);
  const Matrix u = haar_unitary(2, rng);
  const BoundSpec spec{2.0, WeightVector::indicator(4, 4), u,
                       BoundForm::integral};
  for (auto _ : state)
    benchmark::DoNotOptimize(ev.evaluate(spec).value);
}
BENCHMARK(bench_bound_eval)->Arg(129)->Arg(513)->Arg(2049);

void bench_bound_eval_cold_basis(benchmark::State& state) {
  const auto traj = decay_traj(513);
  BoundEvaluator ev(traj);
  std::mt19937_64 rng(13);
  for (auto _ : state) {
    const Matrix u = haar_unitary(2, rng);
    benchmark::DoNotOptimize(
        ev.evaluate({2.0, WeightVector::indicator(4, 4), u,
                     BoundForm::integral})
            .value);
  }
}
BENCHMARK(bench_bound_eval_cold_basis);

void bench_propagate(benchmark::State& state) {
  GeneratorSpec gen;
  const Matrix h = pauli_x();
  gen.hamiltonian = [h](double) { return h; };
  gen.jumps.push_back({pauli_z(), 0.5});
  Matrix rho0 = Matrix::Zero(2, 2);
  rho0(0, 0) = 1.0;
  for (auto _ : state) {
    const auto traj = propagate(gen, rho0, 1.0, 64);
    benchmark::DoNotOptimize(traj.samples.back()(0, 0));
  }
}
BENCHMARK(bench_propagate);

void bench_optimize_full(benchmark::State& state) {
  const auto traj = decay_traj(257);
  OptimizeConfig cfg;
  cfg.basis_samples = 20;
  cfg.hillclimb_iters = 100;
  for (auto _ : state) {
    const auto rep = optimize_full(traj, cfg);
    benchmark::DoNotOptimize(rep.best_value);
  }
}
BENCHMARK(bench_optimize_full);

}  // namespace

BENCHMARK_MAIN();
