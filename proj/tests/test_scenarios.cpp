#include <cstdio>
#include <fstream>

#include <doctest.h>

#include "qsl/bounds.hpp"
#include "qsl/scenarios.hpp"

using namespace qsl;

TEST_CASE("scenario name round trip") {
  for (const auto& name : {"qubit_ti", "qudit4", "spont_emission", "nv_center",
                           "dephasing", "coherence_gen"})
    CHECK(scenario_name(scenario_from_name(name)) == name);
  CHECK_THROWS(scenario_from_name("unknown"));
}

TEST_CASE("spin-1 operator algebra") {
  const Matrix sx = spin1_x(), sy = spin1_y(), sz = spin1_z();
  CHECK((commutator(sx, sy) - Complex(0, 1) * sz).norm() <= 1e-12);
  CHECK((commutator(sy, sz) - Complex(0, 1) * sx).norm() <= 1e-12);
  CHECK((sx * sx + sy * sy + sz * sz - 2.0 * Matrix::Identity(3, 3)).norm() <=
        1e-12);
}

TEST_CASE("parameter validation") {
  ScenarioConfig cfg;
  cfg.id = ScenarioId::qubit_ti;
  CHECK_THROWS(build_scenario(cfg));  // tau missing
  cfg.params["tau"] = -1.0;
  CHECK_THROWS(build_scenario(cfg));
  cfg.params["tau"] = 1.0;
  cfg.grid_points = 32;
  CHECK_THROWS(build_scenario(cfg));
  cfg.grid_points = 128;
  CHECK_NOTHROW(build_scenario(cfg));

  ScenarioConfig nv;
  nv.id = ScenarioId::nv_center;
  nv.params["tau"] = 0.1;
  CHECK_THROWS(build_scenario(nv));  // B1 required, no default
  nv.params["B1"] = 0.02;
  CHECK_NOTHROW(build_scenario(nv));
}

TEST_CASE("qudit fidelity closed form") {
  ScenarioConfig cfg;
  cfg.id = ScenarioId::qudit4;
  cfg.params["tau"] = 2.3;
  cfg.grid_points = 128;
  const auto sc = build_scenario(cfg);
  CHECK(sc.fidelity(0.0) == doctest::Approx(1.0));
  for (size_t k = 0; k < sc.trajectory.times.size(); ++k) {
    const double overlap = std::sqrt(
        std::max(0.0, (sc.initial * sc.trajectory.samples[k]).trace().real()));
    CHECK(overlap ==
          doctest::Approx(sc.fidelity(sc.trajectory.times[k])).epsilon(1e-10));
  }
  CHECK(kQuditCriticalTau == doctest::Approx(3.43));
}

TEST_CASE("decay scenario carries the documented degeneracy") {
  ScenarioConfig cfg;
  cfg.id = ScenarioId::spont_emission;
  cfg.params = {{"tau", 1.0}, {"gamma", 1.0}};
  cfg.grid_points = 256;
  const auto sc = build_scenario(cfg);

  const auto res = qsl_bound(sc.trajectory,
                             {1.0, WeightVector::indicator(4, 1),
                              Matrix::Identity(2, 2), BoundForm::supremum});
  CHECK(res.degenerate);  // |Δ₁₁| = |Δ₄₄| = (1 − e^{−γτ})/2
  CHECK(res.numerator ==
        doctest::Approx((1.0 - std::exp(-1.0)) / 2.0).epsilon(1e-10));

  // both tied matchings give the same bound: the reported max equals the
  // value computed from either diagonal coordinate's derivative profile
  CHECK(res.value == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-8));

  // fidelity closed form
  for (size_t k = 0; k < sc.trajectory.times.size(); ++k) {
    const double t = sc.trajectory.times[k];
    const double overlap = std::sqrt(
        std::max(0.0, (sc.initial * sc.trajectory.samples[k]).trace().real()));
    CHECK(overlap == doctest::Approx(sc.fidelity(t)).epsilon(1e-10));
  }
}

TEST_CASE("stationary control field yields trivial bounds") {
  ScenarioConfig cfg;
  cfg.id = ScenarioId::nv_center;
  cfg.params = {{"tau", 0.2}, {"B1", 0.0}};
  cfg.grid_points = 64;
  const auto sc = build_scenario(cfg);
  const auto r = qsl_bound(sc.trajectory,
                           {2.0, WeightVector::indicator(9, 9),
                            Matrix::Identity(3, 3), BoundForm::integral});
  CHECK(r.value <= 1e-8);
  CHECK(mt_bound_closed(sc.trajectory, sc.trajectory.generator.hamiltonian) <=
        1e-7);
}

TEST_CASE("closed scenarios preserve purity") {
  for (auto id : {ScenarioId::qubit_ti, ScenarioId::nv_center}) {
    ScenarioConfig cfg;
    cfg.id = id;
    cfg.params = {{"tau", id == ScenarioId::nv_center ? 0.1 : 2.0},
                  {"B1", 0.01}};
    cfg.grid_points = 128;
    const auto sc = build_scenario(cfg);
    for (const auto& s : sc.trajectory.samples)
      CHECK(std::abs((s * s).trace().real() - 1.0) <= 1e-8);
  }
}

TEST_CASE("config file parsing") {
  const std::string path = "qsl_test_config.tmp";
  {
    std::ofstream out(path);
    out << "# decay scenario\n"
        << "gamma = 1.5\n"
        << "tau=2.0   # inline comment\n"
        << "\n"
        << "B0 = 0.05\n";
  }
  const auto params = parse_config_file(path);
  CHECK(params.at("gamma") == 1.5);
  CHECK(params.at("tau") == 2.0);
  CHECK(params.at("B0") == 0.05);
  {
    std::ofstream out(path);
    out << "gamma 1.5\n";
  }
  CHECK_THROWS(parse_config_file(path));
  {
    std::ofstream out(path);
    out << "gamma = abc\n";
  }
  CHECK_THROWS(parse_config_file(path));
  std::remove(path.c_str());
  CHECK_THROWS(parse_config_file("does_not_exist.cfg"));
}
