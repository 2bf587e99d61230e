#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ddgate/evolution.hpp"
#include "support.hpp"

using namespace ddgate;
using testing::max_abs;

namespace {

constexpr double kY = std::numbers::pi / 2;

SpinSystem generic(double azx, InitialState init = InitialState::Polarized) {
  GenericSystemParams p;
  p.omega00 = 50;
  p.targets = {{1.0, azx}};
  return make_generic_system(p, init);
}

SequenceSpec gate_spec(Family f = Family::CPMG) {
  SequenceSpec s;
  s.family = f;
  s.pi_pulse = {5.0, 50.0, 0.0, 0.1};
  s.wrapper_phase = kY;
  s.options.edges = EdgeTiming::Uniform;
  return s;
}

SimConfig split_cfg(double dt = 1e-3) {
  SimConfig c;
  c.dt = dt;
  c.free_evolution = FreeEvolution::Split;
  return c;
}

SpinSystem nv(InitialState init) {
  NvParams p;
  p.theta0 = 2.9 * std::numbers::pi / 180;
  return make_nv_system(p, init);
}

SequenceSpec nv_spec(const SpinSystem& sys, Family f) {
  const double carrier = sys.central_transition_frequency();
  SequenceSpec s;
  s.family = f;
  s.pi_pulse = {calibrate_rabi(sys, 0.01285, carrier, 1e-5).omega1, carrier, 0.0, 0.01285};
  s.wrapper_phase = kY;
  s.options = {EdgeTiming::Symmetric, f == Family::XYN ? ClosingRule::ThreeHalvesWhenOddBlocks
                                                       : ClosingRule::HalfPi};
  return s;
}

SimConfig nv_cfg() {
  SimConfig c;
  c.dt = 1e-5;
  return c;
}

}  // namespace

TEST_CASE("SimConfig validation") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.dt = 0.01;
  const auto seq = gate_spec().compile(4, 0.5);
  CHECK_THROWS_AS(c.validate_for(seq), std::invalid_argument);  // 10 steps per π pulse
  c.dt = 0.004;
  CHECK_THROWS_AS(c.validate_for(seq), std::invalid_argument);  // carrier undersampled
  c.dt = 0.001;
  CHECK_NOTHROW(c.validate_for(seq));
}

TEST_CASE("pulse propagator without drive is free evolution") {
  const auto sys = generic(0.2);
  const DrivePulse weak{1e-12, 50.0, 0.0, 0.1};
  const Operator u = pulse_propagator(sys.h0, weak, sys.drive, 0.3, 1e-3);
  CHECK(max_abs(u.matrix() - herm_propagator(sys.h0, 0.1).matrix()) < 1e-9);
  CHECK_THROWS_AS(pulse_propagator(sys.h0, DrivePulse{5, 50, 0, 4e-4}, sys.drive, 0, 1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(pulse_propagator(sys.h0, weak, spin_ops(2).sx, 0, 1e-3), std::invalid_argument);
}

TEST_CASE("resonant pi pulse inverts the central qubit") {
  const auto sys = generic(0.1);
  const Operator u = pulse_propagator(sys.h0, DrivePulse{5.0, 50.0, 0.0, 0.1}, sys.drive, 0, 1e-3);
  const auto rho = evolve(sys.initial, u);
  CHECK(expval(rho, sys.observable("Sz").op) == doctest::Approx(-0.5).epsilon(0.02));
  CHECK(max_abs(u.matrix().adjoint() * u.matrix() - Matrix::Identity(4, 4)) < 1e-9);
}

TEST_CASE("pulse propagator converges in dt") {
  const auto sys = generic(0.2);
  const DrivePulse p{5.0, 50.0, 0.3, 0.1};
  auto u = [&](double dt) { return pulse_propagator(sys.h0, p, sys.drive, 0.25, dt).matrix(); };
  const Matrix ref = u(1.25e-5);
  CHECK(max_abs(u(1e-4) - u(5e-5)) < 1e-4);
  // second order: halving dt quarters the error
  const double e1 = max_abs(u(1e-3) - ref), e2 = max_abs(u(5e-4) - ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("sequence propagators are unitary and preserve purity") {
  const auto sys = generic(0.2);
  SimConfig cfg = split_cfg();
  cfg.record_intermediate = true;
  for (Family f : {Family::CPMG, Family::XYN}) {
    for (int n : {1, 6, 12}) {
      const auto seq = gate_spec(f).compile(n, 0.5);
      const auto run = apply_sequence(sys, seq, cfg);
      const Matrix& u = run.propagator.matrix();
      CHECK(max_abs(u.adjoint() * u - Matrix::Identity(4, 4)) <= 1e-8);
      REQUIRE(run.intermediate.size() == seq.elements.size());
      for (const auto& rho : run.intermediate) CHECK(std::abs(rho.purity() - 1.0) <= 1e-8);
    }
  }
  const auto mixed = generic(0.2, InitialState::MixedTarget);
  const double p0 = mixed.initial.purity();
  const auto run = apply_sequence(mixed, gate_spec().compile(9, 0.5), cfg);
  for (const auto& rho : run.intermediate) CHECK(std::abs(rho.purity() - p0) <= 1e-8);
}

TEST_CASE("observables converge when dt is halved") {
  const auto sys = generic(0.2);
  for (int n : {6, 12}) {
    const auto seq = gate_spec().compile(n, 0.5);
    auto obs = [&](double dt) {
      return evaluate_observables(sys, apply_sequence(sys, seq, split_cfg(dt)).final_state);
    };
    const auto a = obs(2.5e-4), b = obs(1.25e-4);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-3);
  }
}

TEST_CASE("wrappers with zero net rotation restore the pole") {
  const auto sys = generic(0.1);
  PulseSequence seq;
  seq.pi_pulse = {5.0, 50.0, 0.0, 0.1};
  seq.elements = {PulseElement{{5.0, 50.0, kY, 0.05}, NominalAngle::HalfPi},
                  Delay{0.0},
                  PulseElement{{5.0, 50.0, kY + std::numbers::pi, 0.05}, NominalAngle::HalfPi}};
  SimConfig cfg;
  const auto rho = apply_sequence(sys, seq, cfg).final_state;
  CHECK(expval(rho, sys.observable("Sz").op) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("element failures name the element") {
  const auto sys = generic(0.1);
  PulseSequence seq;
  seq.pi_pulse = {5.0, 50.0, 0.0, 0.1};
  seq.elements = {Delay{0.1}, Delay{-0.1}};
  Propagator p(sys, SimConfig{});
  CHECK_THROWS_WITH_AS(p.sequence(seq), doctest::Contains("sequence element 1"),
                       std::invalid_argument);
}

TEST_CASE("prefix cache matches direct propagation") {
  const auto sys = generic(0.2);
  const auto spec = gate_spec(Family::XYN);
  Propagator cached(sys, split_cfg());
  for (int n : {3, 4, 8, 5, 12}) {
    const Matrix a = cached.sequence(spec.compile(n, 0.5)).matrix();
    Propagator fresh(sys, split_cfg());
    CHECK(max_abs(a - fresh.sequence(spec.compile(n, 0.5)).matrix()) < 1e-12);
  }
}

TEST_CASE("sweeps") {
  const auto sys = generic(0.2);
  const auto spec = gate_spec();
  const auto cfg = split_cfg();

  const auto single = sweep_tau(sys, spec, 4, {0.5}, cfg);
  const auto direct = evaluate_observables(sys, apply_sequence(sys, spec.compile(4, 0.5), cfg).final_state);
  REQUIRE(single.axis_values.size() == 1);
  for (std::size_t k = 0; k < sys.observables.size(); ++k)
    CHECK(single.trace(sys.observables[k].label)[0] == direct[k]);

  std::vector<double> grid;
  for (int k = 0; k < 13; ++k) grid.push_back(0.4 + 0.015 * k);
  const auto serial = sweep_tau(sys, spec, 8, grid, cfg, 1);
  const auto parallel = sweep_tau(sys, spec, 8, grid, cfg, 3);
  CHECK(serial.axis_values == parallel.axis_values);
  CHECK(serial.traces == parallel.traces);

  const auto ns = sweep_n(sys, spec, 0.5, n_range(1, 12), cfg, true);
  CHECK(ns.axis_values.size() == 12);
  CHECK(ns.states.size() == 12);
  const auto one = evaluate_observables(sys, apply_sequence(sys, spec.compile(7, 0.5), cfg).final_state);
  CHECK(ns.trace("Iz1")[6] == doctest::Approx(one[3]).epsilon(1e-12));
  CHECK(n_range(2, 9, 3) == std::vector<int>{2, 5, 8});

  CHECK_THROWS_AS(sweep_tau(sys, spec, 8, {0.5, 0.5}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(sweep_tau(sys, spec, 8, {}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(sweep_n(sys, spec, 0.5, {3, 2}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(n_range(0, 3), std::invalid_argument);
}

TEST_CASE("central and target observables move in opposite directions") {
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(0.4 + 0.005 * k);
  SequenceSpec spec = gate_spec();
  spec.options.edges = EdgeTiming::Symmetric;
  for (double azx : {0.1, 0.2}) {
    const auto sys = generic(azx);
    const auto r = sweep_tau(sys, spec, 10, grid, SimConfig{});
    const auto& sz = r.trace("Sz");
    const auto& iz = r.trace("Iz1");
    double depth = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      // off resonance Sz = −1/2 and Iz = +1/2
      const double dsz = sz[k] + 0.5, diz = iz[k] - 0.5;
      depth = std::max(depth, std::abs(diz));
      CHECK(std::abs(dsz + diz) <= 0.02);
    }
    CHECK(depth > 0.1);
  }
}

TEST_CASE("anti-phase oscillation versus N") {
  const auto sys = generic(0.2);
  const auto r = sweep_n(sys, gate_spec(), 0.5, n_range(1, 24), split_cfg());
  const auto& sz = r.trace("Sz");
  const auto& iz = r.trace("Iz1");
  for (std::size_t k = 0; k < sz.size(); ++k) CHECK(std::abs(sz[k] + iz[k]) < 0.02);
  CHECK(iz[11] < -0.49);
  CHECK(sz[11] > 0.49);
}

TEST_CASE("XYN leaves a mixed target unpolarised") {
  const auto sys = generic(0.2, InitialState::MixedTarget);
  SequenceSpec symmetric = gate_spec(Family::XYN);
  symmetric.options.edges = EdgeTiming::Symmetric;
  for (double tau : {0.45, 0.5, 0.55, 1.0, 1.5}) {
    const auto r = sweep_n(sys, symmetric, tau, n_range(1, 24), SimConfig{});
    for (double v : r.trace("Iz1")) CHECK(std::abs(v) <= 0.02);
  }
  const auto nvm = nv(InitialState::MixedTarget);
  const auto spec = nv_spec(nvm, Family::XYN);
  for (double tau : {0.3534, 0.364}) {
    const auto r = sweep_n(nvm, spec, tau, n_range(1, 24), nv_cfg());
    for (double v : r.trace("Iz")) CHECK(std::abs(v) <= 0.02);
  }
}

TEST_CASE("XYN central observable does not depend on the target state") {
  const auto pol = nv(InitialState::Polarized);
  const auto mix = nv(InitialState::MixedTarget);
  const auto spec = nv_spec(pol, Family::XYN);
  for (double tau : {0.3534, 0.364}) {
    const auto a = sweep_n(pol, spec, tau, n_range(1, 24), nv_cfg());
    const auto b = sweep_n(mix, spec, tau, n_range(1, 24), nv_cfg());
    for (std::size_t k = 0; k < a.axis_values.size(); ++k)
      CHECK(std::abs(a.trace("Sz")[k] - b.trace("Sz")[k]) <= 0.02);
  }
}
