#include "qsl/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsl {

namespace {

Matrix dissipator(const Matrix& x, const std::vector<JumpOperator>& jumps,
                  bool adjoint) {
  Matrix acc = Matrix::Zero(x.rows(), x.cols());
  for (const auto& [l, rate] : jumps) {
    if (rate < 0) throw std::invalid_argument("dissipator: negative rate");
    const Matrix ll = l.adjoint() * l;
    if (adjoint)
      acc += rate * (l.adjoint() * x * l - 0.5 * anticommutator(ll, x));
    else
      acc += rate * (l * x * l.adjoint() - 0.5 * anticommutator(ll, x));
  }
  return acc;
}

Matrix hamiltonian_at(const GeneratorSpec& gen, double t, Eigen::Index n) {
  if (!gen.hamiltonian) return Matrix::Zero(n, n);
  Matrix h = gen.hamiltonian(t);
  if (!is_hermitian(h))
    throw std::invalid_argument("GeneratorSpec: H(t) not Hermitian");
  return h;
}

long round_up8(long k) { return ((k + 7) / 8) * 8; }

}  // namespace

Matrix lindblad_rhs(const Matrix& rho, const GeneratorSpec& gen, double t) {
  require_square(rho, "lindblad_rhs");
  const Matrix h = hamiltonian_at(gen, t, rho.rows());
  return Complex(0, -1.0 / gen.hbar) * commutator(h, rho) +
         dissipator(rho, gen.jumps, /*adjoint=*/false);
}

Matrix adjoint_rhs(const Matrix& a, const GeneratorSpec& gen, double t) {
  require_square(a, "adjoint_rhs");
  const Matrix h = hamiltonian_at(gen, t, a.rows());
  return Complex(0, 1.0 / gen.hbar) * commutator(h, a) +
         dissipator(a, gen.jumps, /*adjoint=*/true);
}

Matrix apply_generator(const Matrix& m, const GeneratorSpec& gen, double t) {
  return gen.picture == Picture::schrodinger ? lindblad_rhs(m, gen, t)
                                             : adjoint_rhs(m, gen, t);
}

namespace {

std::vector<Matrix> rk4_grid(const GeneratorSpec& gen, const Matrix& initial,
                             double tau, long steps) {
  const double dt = tau / double(steps);
  std::vector<Matrix> samples;
  samples.reserve(steps + 1);
  samples.push_back(initial);
  Matrix y = initial;
  for (long k = 0; k < steps; ++k) {
    const double t = dt * double(k);
    const Matrix k1 = apply_generator(y, gen, t);
    const Matrix k2 = apply_generator(y + 0.5 * dt * k1, gen, t + 0.5 * dt);
    const Matrix k3 = apply_generator(y + 0.5 * dt * k2, gen, t + 0.5 * dt);
    // Left-limit endpoint stage: keeps every stage of this step inside
    // [t, t+dt), so generators that switch at a grid node stay consistent
    // within the step (the next step's k1 picks up the new piece exactly).
    const Matrix k4 =
        apply_generator(y + dt * k3, gen, std::nextafter(t + dt, t));
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite())
      throw std::runtime_error("propagate: non-finite values encountered");
    samples.push_back(y);
  }
  return samples;
}

}  // namespace

Trajectory propagate(const GeneratorSpec& gen, const Matrix& initial,
                     double tau, int base_steps, const PropagateOptions& opts) {
  require_square(initial, "propagate");
  if (tau <= 0) throw std::invalid_argument("propagate: tau must be > 0");
  if (base_steps < 16) throw std::invalid_argument("propagate: base_steps < 16");

  long steps = round_up8(base_steps);
  std::vector<Matrix> samples = rk4_grid(gen, initial, tau, steps);
  double residual = std::numeric_limits<double>::infinity();
  while (true) {
    if (2 * steps > opts.max_steps)
      throw std::runtime_error(
          "propagate: convergence cap reached, final-sample residual " +
          std::to_string(residual));
    std::vector<Matrix> finer = rk4_grid(gen, initial, tau, 2 * steps);
    residual = (finer.back() - samples.back()).norm();
    samples = std::move(finer);
    steps *= 2;
    if (residual < opts.converge_tol) break;
  }

  Trajectory traj;
  traj.source = TrajectorySource::integrated;
  traj.generator = gen;
  traj.times.resize(steps + 1);
  traj.derivatives.resize(steps + 1);
  for (long k = 0; k <= steps; ++k) {
    traj.times[k] = tau * double(k) / double(steps);
    traj.derivatives[k] = apply_generator(samples[k], gen, traj.times[k]);
  }
  traj.samples = std::move(samples);
  return traj;
}

namespace {

double param(const std::map<std::string, double>& params,
             const std::string& key, double fallback = std::nan("")) {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  if (std::isnan(fallback))
    throw std::invalid_argument("analytic_trajectory: missing parameter " + key);
  return fallback;
}

Matrix spont_emission_state(double g, double t) {
  const double e = std::exp(-g * t);
  const double h = std::exp(-g * t / 2.0);
  Matrix rho(2, 2);
  rho << 1.0 - e / 2.0, h / 2.0, h / 2.0, e / 2.0;
  return rho;
}

// e^{−γt/2}·[[−sin2t, i(γ/4·sin2t − cos2t)], [c.c., sin2t]], = σ_y at t = 0.
Matrix dephasing_observable_at(double g, double t) {
  const double s = std::sin(2.0 * t), c = std::cos(2.0 * t);
  const double e = std::exp(-g * t / 2.0);
  const Complex off(0.0, g / 4.0 * s - c);
  Matrix a(2, 2);
  a << -s, off, -off, s;
  return e * a;
}

Matrix dephasing_observable_dot(double g, double t) {
  const double s = std::sin(2.0 * t), c = std::cos(2.0 * t);
  const double e = std::exp(-g * t / 2.0);
  const Complex off(0.0, g / 2.0 * c + 2.0 * s);
  Matrix m(2, 2);
  m << -2.0 * c, off, -off, 2.0 * c;
  return -g / 2.0 * dephasing_observable_at(g, t) + e * m;
}

// I/2 + e^{−γt/2}·[[cos2t/2 + γ/8·sin2t, i·sin2t/2], [c.c., −…]], |0⟩⟨0| at 0.
Matrix coherence_state_at(double g, double t) {
  const double s = std::sin(2.0 * t), c = std::cos(2.0 * t);
  const double e = std::exp(-g * t / 2.0);
  const double d = c / 2.0 + g / 8.0 * s;
  Matrix m(2, 2);
  m << d, Complex(0.0, s / 2.0), Complex(0.0, -s / 2.0), -d;
  return 0.5 * Matrix::Identity(2, 2) + e * m;
}

Matrix coherence_state_dot(double g, double t) {
  const double s = std::sin(2.0 * t), c = std::cos(2.0 * t);
  const double e = std::exp(-g * t / 2.0);
  const double d = -s + g / 4.0 * c;
  Matrix m(2, 2);
  m << d, Complex(0.0, c), Complex(0.0, -c), -d;
  const Matrix rho = coherence_state_at(g, t);
  return -g / 2.0 * (rho - 0.5 * Matrix::Identity(2, 2)) + e * m;
}

GeneratorSpec dephasing_generator(double g, Picture picture) {
  GeneratorSpec gen;
  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  Matrix sz(2, 2);
  sz << 1, 0, 0, -1;
  gen.hamiltonian = [sx](double) { return sx; };
  gen.jumps.push_back({sz, g / 2.0});
  gen.picture = picture;
  return gen;
}

}  // namespace

Trajectory analytic_trajectory(AnalyticModel model,
                               const std::map<std::string, double>& params,
                               double tau, int grid_points) {
  if (tau <= 0) throw std::invalid_argument("analytic_trajectory: tau <= 0");
  if (grid_points < 64)
    throw std::invalid_argument("analytic_trajectory: grid_points < 64");
  const long intervals = ((long(grid_points) + 7) / 8) * 8;

  Trajectory traj;
  traj.source = TrajectorySource::analytic;
  traj.times.resize(intervals + 1);
  for (long k = 0; k <= intervals; ++k)
    traj.times[k] = tau * double(k) / double(intervals);

  std::function<Matrix(double)> state, deriv;
  switch (model) {
    case AnalyticModel::spontaneous_emission: {
      const double g = param(params, "gamma");
      Matrix lower(2, 2);
      lower << 0, 1, 0, 0;  // |0⟩⟨1|, excited state is index 1
      traj.generator.jumps.push_back({lower, g});
      state = [g](double t) { return spont_emission_state(g, t); };
      const GeneratorSpec gen = traj.generator;
      deriv = [gen, g](double t) {
        return lindblad_rhs(spont_emission_state(g, t), gen, t);
      };
      break;
    }
    case AnalyticModel::dephasing_observable: {
      const double g = param(params, "gamma");
      traj.generator = dephasing_generator(g, Picture::heisenberg);
      state = [g](double t) { return dephasing_observable_at(g, t); };
      deriv = [g](double t) { return dephasing_observable_dot(g, t); };
      break;
    }
    case AnalyticModel::coherence_state: {
      const double g = param(params, "gamma");
      traj.generator = dephasing_generator(g, Picture::schrodinger);
      state = [g](double t) { return coherence_state_at(g, t); };
      deriv = [g](double t) { return coherence_state_dot(g, t); };
      break;
    }
    case AnalyticModel::qubit_time_independent: {
      Matrix h(2, 2);
      h << 0, 0, 0, 1;
      traj.generator.hamiltonian = [h](double) { return h; };
      state = [](double t) {
        Matrix rho(2, 2);
        rho << 0.5, 0.5 * std::exp(Complex(0, t)), 0.5 * std::exp(Complex(0, -t)),
            0.5;
        return rho;
      };
      const GeneratorSpec gen = traj.generator;
      deriv = [gen, state](double t) { return lindblad_rhs(state(t), gen, t); };
      break;
    }
    case AnalyticModel::qudit4: {
      const RVector energies = (RVector(4) << 0.0, 1.0, kPi, 4.0).finished();
      const RVector amps =
          (RVector(4) << std::sqrt(0.2), std::sqrt(0.4), std::sqrt(0.3),
           std::sqrt(0.1))
              .finished();
      Matrix h = Matrix::Zero(4, 4);
      h.diagonal() = energies.cast<Complex>();
      traj.generator.hamiltonian = [h](double) { return h; };
      state = [energies, amps](double t) {
        CVector psi(4);
        for (int k = 0; k < 4; ++k)
          psi[k] = amps[k] * std::exp(Complex(0, -energies[k] * t));
        return Matrix(psi * psi.adjoint());
      };
      const GeneratorSpec gen = traj.generator;
      deriv = [gen, state](double t) { return lindblad_rhs(state(t), gen, t); };
      break;
    }
    default:
      throw std::invalid_argument("analytic_trajectory: unknown scenario id");
  }

  traj.samples.reserve(intervals + 1);
  traj.derivatives.reserve(intervals + 1);
  for (double t : traj.times) {
    traj.samples.push_back(state(t));
    traj.derivatives.push_back(deriv(t));
  }
  return traj;
}

}  // namespace qsl
