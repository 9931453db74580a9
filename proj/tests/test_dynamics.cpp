#include <cmath>

#include <doctest.h>

#include "qsl/dynamics.hpp"
#include "qsl/scenarios.hpp"

using namespace qsl;

namespace {

Matrix decay_state(double g, double t) {
  const double e = std::exp(-g * t), h = std::exp(-g * t / 2.0);
  Matrix rho(2, 2);
  rho << 1.0 - e / 2.0, h / 2.0, h / 2.0, e / 2.0;
  return rho;
}

GeneratorSpec decay_generator(double g) {
  GeneratorSpec gen;
  Matrix lower(2, 2);
  lower << 0, 1, 0, 0;
  gen.jumps.push_back({lower, g});
  return gen;
}

}  // namespace

TEST_CASE("Lindblad right-hand side") {
  // stationary eigenstate projector of a time-independent H
  Matrix h(2, 2);
  h << 0, 0, 0, 1;
  GeneratorSpec closed;
  closed.hamiltonian = [h](double) { return h; };
  Matrix proj = Matrix::Zero(2, 2);
  proj(1, 1) = 1;
  CHECK(lindblad_rhs(proj, closed, 0.0).norm() <= 1e-14);

  // decay generator applied to the equal superposition
  Matrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  const double g = 0.8;
  Matrix expected(2, 2);
  expected << 0.5, -0.25, -0.25, -0.5;
  CHECK((lindblad_rhs(plus, decay_generator(g), 0.0) - g * expected).norm() <=
        1e-12);

  // finite-difference oracle along the closed form
  const double step = 1e-6;
  for (double t : {0.3, 1.1}) {
    const Matrix fd =
        (decay_state(g, t + step) - decay_state(g, t - step)) / (2.0 * step);
    CHECK((lindblad_rhs(decay_state(g, t), decay_generator(g), t) - fd)
              .norm() <= 1e-8);
  }

  // output is Hermitian and traceless for Hermitian input
  const Matrix out = lindblad_rhs(plus, decay_generator(g), 0.0);
  CHECK((out - out.adjoint()).norm() <= 1e-12);
  CHECK(std::abs(out.trace()) <= 1e-12);
}

TEST_CASE("adjoint right-hand side") {
  const double g = 0.7;
  GeneratorSpec deph;
  deph.hamiltonian = [](double) { return pauli_x(); };
  deph.jumps.push_back({pauli_z(), g / 2.0});
  deph.picture = Picture::heisenberg;

  // unital: the identity is stationary
  CHECK(adjoint_rhs(Matrix(Matrix::Identity(2, 2)), deph, 0.0).norm() <= 1e-14);

  // finite difference of the closed-form observable at t = 0
  const auto traj =
      analytic_trajectory(AnalyticModel::dephasing_observable, {{"gamma", g}},
                          0.01, 64);
  const double dt = traj.times[1] - traj.times[0];
  const Matrix fd = (traj.samples[2] - traj.samples[0]) / (2.0 * dt);
  CHECK((fd - traj.derivatives[1]).norm() <= 1e-6);
  CHECK((adjoint_rhs(pauli_y(), deph, 0.0) - traj.derivatives[0]).norm() <=
        1e-12);

  // without dissipators the adjoint is the sign-flipped Lindbladian
  GeneratorSpec unitary;
  unitary.hamiltonian = [](double) { return pauli_x(); };
  const Matrix a = pauli_z();
  CHECK((adjoint_rhs(a, unitary, 0.0) + lindblad_rhs(a, unitary, 0.0)).norm() <=
        1e-14);
}

TEST_CASE("RK4 propagation") {
  // spontaneous emission against the closed form
  const auto traj = propagate(decay_generator(1.0), decay_state(1.0, 0.0), 1.0,
                              64);
  double dev = 0.0;
  for (size_t k = 0; k < traj.samples.size(); ++k)
    dev = std::max(dev, (traj.samples[k] - decay_state(1.0, traj.times[k]))
                            .norm());
  CHECK(dev <= 1e-8);
  CHECK(traj.source == TrajectorySource::integrated);

  // zero generator: constant trajectory
  GeneratorSpec none;
  Matrix rho0(2, 2);
  rho0 << 0.25, 0, 0, 0.75;
  const auto flat = propagate(none, rho0, 1.0, 16);
  for (const auto& s : flat.samples) CHECK((s - rho0).norm() <= 1e-14);

  // derivative array matches the generator on every grid point
  for (size_t k = 0; k < traj.samples.size(); ++k)
    CHECK((traj.derivatives[k] -
           lindblad_rhs(traj.samples[k], traj.generator, traj.times[k]))
              .norm() <= 1e-12);

  CHECK_THROWS(propagate(none, rho0, 1.0, 8));   // too few base steps
  CHECK_THROWS(propagate(none, rho0, -1.0, 64)); // bad horizon
}

TEST_CASE("a diagonal Hamiltonian conserves populations") {
  ScenarioConfig cfg;
  cfg.id = ScenarioId::nv_center;
  cfg.params = {{"tau", 0.1}, {"B1", 0.0}};
  cfg.grid_points = 64;
  const auto sc = build_scenario(cfg);
  for (const auto& s : sc.trajectory.samples)
    for (int d = 0; d < 3; ++d)
      CHECK(std::abs(s(d, d) - sc.trajectory.samples[0](d, d)) <= 1e-10);
}

TEST_CASE("analytic trajectories") {
  // decay at γt = ln 2
  const double tau = 2.0 * std::log(2.0);
  const auto se = analytic_trajectory(AnalyticModel::spontaneous_emission,
                                      {{"gamma", 1.0}}, tau, 64);
  // the midpoint of the grid lands on t = ln 2
  const auto& mid = se.samples[se.samples.size() / 2];
  CHECK(mid(0, 0).real() == doctest::Approx(0.75));
  CHECK(mid(1, 1).real() == doctest::Approx(0.25));
  CHECK(std::abs(mid(0, 1)) == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))));

  const auto deph = analytic_trajectory(AnalyticModel::dephasing_observable,
                                        {{"gamma", 1.3}}, 1.0, 64);
  CHECK((deph.samples.front() - pauli_y()).norm() <= 1e-14);

  const auto coh = analytic_trajectory(AnalyticModel::coherence_state,
                                       {{"gamma", 1.3}}, 1.0, 64);
  Matrix ket0 = Matrix::Zero(2, 2);
  ket0(0, 0) = 1;
  CHECK((coh.samples.front() - ket0).norm() <= 1e-14);

  CHECK_THROWS(analytic_trajectory(AnalyticModel::spontaneous_emission, {},
                                   1.0, 64));  // missing gamma
  CHECK_THROWS(analytic_trajectory(AnalyticModel::qudit4, {}, 1.0, 32));
}

TEST_CASE("integrated matches analytic for every closed form") {
  struct Case {
    AnalyticModel model;
    std::map<std::string, double> params;
    double tau;
  };
  for (const auto& c : {Case{AnalyticModel::spontaneous_emission,
                             {{"gamma", 0.9}}, 1.2},
                        Case{AnalyticModel::qubit_time_independent, {}, 2.0},
                        Case{AnalyticModel::qudit4, {}, 1.5}}) {
    const auto ana = analytic_trajectory(c.model, c.params, c.tau, 128);
    const auto num =
        propagate(ana.generator, ana.samples.front(), c.tau, 128);
    double dev = 0.0;
    for (size_t k = 0; k < ana.samples.size(); ++k) {
      // analytic grid is a subset of the converged integrator grid
      const size_t stride = (num.samples.size() - 1) / (ana.samples.size() - 1);
      dev = std::max(dev, (ana.samples[k] - num.samples[k * stride]).norm());
    }
    CHECK(dev <= 1e-7);
  }
}

TEST_CASE("dephasing generator is a controlled approximation") {
  // The generator reproducing the closed-form observable exactly at t = 0
  // drifts from it at order γ²; halving γ shrinks the gap ~4x.
  auto gap = [](double g) {
    const auto traj = analytic_trajectory(AnalyticModel::dephasing_observable,
                                          {{"gamma", g}}, 1.0, 64);
    const auto num =
        propagate(traj.generator, traj.samples.front(), 1.0, 128);
    const size_t stride = (num.samples.size() - 1) / (traj.samples.size() - 1);
    double dev = 0.0;
    for (size_t k = 0; k < traj.samples.size(); ++k)
      dev = std::max(dev, (traj.samples[k] - num.samples[k * stride]).norm());
    return dev;
  };
  const double g1 = gap(0.2), g2 = gap(0.1);
  CHECK(g1 / g2 > 3.0);
  CHECK(g1 / g2 < 5.0);
}

TEST_CASE("state trajectories stay physical; closed systems keep purity") {
  const auto se = propagate(decay_generator(1.2), decay_state(1.2, 0.0), 1.0,
                            64);
  for (const auto& s : se.samples) {
    CHECK(std::abs(s.trace().real() - 1.0) <= 1e-8);
    CHECK((s - s.adjoint()).norm() <= 1e-8);
  }
  const auto q = analytic_trajectory(AnalyticModel::qubit_time_independent, {},
                                     3.0, 64);
  const auto closed = propagate(q.generator, q.samples.front(), 3.0, 64);
  for (const auto& s : closed.samples)
    CHECK(std::abs((s * s).trace().real() - 1.0) <= 1e-8);
}

TEST_CASE("derivative arrays converge at second order under grid halving") {
  const auto fine = analytic_trajectory(AnalyticModel::coherence_state,
                                        {{"gamma", 1.0}}, 1.0, 128);
  const auto coarse = analytic_trajectory(AnalyticModel::coherence_state,
                                          {{"gamma", 1.0}}, 1.0, 64);
  auto fd_error = [](const Trajectory& t) {
    const double dt = t.times[1] - t.times[0];
    double err = 0.0;
    for (size_t k = 1; k + 1 < t.samples.size(); ++k) {
      const Matrix fd = (t.samples[k + 1] - t.samples[k - 1]) / (2.0 * dt);
      err = std::max(err, (fd - t.derivatives[k]).norm());
    }
    return err;
  };
  CHECK(fd_error(coarse) / fd_error(fine) > 3.8);
}
