#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ddgate/errors.hpp"
#include "ddgate/evolution.hpp"
#include "support.hpp"

using namespace ddgate;
using testing::max_abs;

namespace {

DensityMatrix bell() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = v(3) = 1.0;
  return DensityMatrix::pure(v, {2, 2});
}

Operator local_unitary(std::mt19937_64& rng) {
  return tensor({Operator(testing::random_unitary(rng, 2)), Operator(testing::random_unitary(rng, 2))});
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace

TEST_CASE("expectation values") {
  const auto s = spin_ops(2);
  CHECK(expval(DensityMatrix::basis(0, {2}), s.sz) == doctest::Approx(0.5));
  CHECK(expval(DensityMatrix::maximally_mixed({2}), s.sz) == doctest::Approx(0.0));
  CHECK(expval(bell(), pauli_product("XX")) == doctest::Approx(1.0));
  CHECK_THROWS_AS(expval(bell(), s.sz), std::invalid_argument);
  Matrix nonh(2, 2);
  nonh << 0, 1, 0, 0;
  CHECK_THROWS_AS(expval(DensityMatrix::basis(0, {2}), Operator(nonh)), std::invalid_argument);

  std::mt19937_64 rng(9);
  const auto a = testing::random_state(rng, {2, 2}), b = testing::random_state(rng, {2, 2});
  const Operator o1(testing::random_hermitian(rng, 4), {2, 2}), o2(testing::random_hermitian(rng, 4), {2, 2});
  const DensityMatrix mix(a.op() * 0.3 + b.op() * 0.7);
  CHECK(expval(mix, o1) == doctest::Approx(0.3 * expval(a, o1) + 0.7 * expval(b, o1)));
  CHECK(expval(a, o1 * 2.0 + o2) == doctest::Approx(2 * expval(a, o1) + expval(a, o2)));
}

TEST_CASE("fluorescence") {
  const auto ref = DensityMatrix(tensor({DensityMatrix::basis(1, {3}).op(), DensityMatrix::maximally_mixed({2}).op()}));
  CHECK(fluorescence(ref, ref) == doctest::Approx(1.0));
  const auto dark = DensityMatrix(tensor({DensityMatrix::basis(2, {3}).op(), DensityMatrix::maximally_mixed({2}).op()}));
  CHECK(fluorescence(ref, dark) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fluorescence(ref, bell()), std::invalid_argument);

  // a unitary commuting with ρ₀ leaves the signal at 1
  const Operator u = herm_propagator(tensor({spin_ops(3).sz, spin_ops(2).sz}), 0.37);
  CHECK(fluorescence(ref, evolve(ref, u)) == doctest::Approx(1.0));

  NvParams p;
  p.theta0 = 2.9 * std::numbers::pi / 180;
  const auto nv = make_nv_system(p, InitialState::MixedTarget);
  const double carrier = nv.central_transition_frequency();
  const auto cal = calibrate_rabi(nv, 0.01285, carrier, 1e-5);
  const Operator pi = pulse_propagator(nv.h0, {cal.omega1, carrier, 0, 0.01285}, nv.drive, 0, 1e-5);
  CHECK(std::abs(fluorescence(nv.fluorescence_ref, evolve(nv.initial, pi))) < 0.01);
}

TEST_CASE("Pauli products") {
  const auto labels = pauli_labels(2);
  REQUIRE(labels.size() == 15);
  CHECK(labels.front() == "IX");
  CHECK(labels.back() == "ZZ");
  CHECK(pauli_labels(3).size() == 63);
  CHECK(pauli_product("ZI")(0, 0).real() == 1.0);
  CHECK(pauli_product("ZI")(2, 2).real() == -1.0);
  CHECK_THROWS_AS(pauli_product("XQ"), std::invalid_argument);
}

TEST_CASE("tomography") {
  const auto zero = DensityMatrix::basis(0, {2, 2});
  CHECK(max_abs(tomography(measure_paulis(zero), 2).matrix() - zero.matrix()) < 1e-10);
  CHECK(concurrence(tomography(measure_paulis(bell()), 2)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(tomography(std::vector<double>(14, 0.0), 2), std::invalid_argument);

  std::mt19937_64 rng(12);
  for (std::size_t nq : {1u, 2u, 3u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto rho = testing::random_state(rng, std::vector<std::size_t>(nq, 2));
      CHECK(max_abs(tomography(measure_paulis(rho), nq).matrix() - rho.matrix()) <= 1e-9);
    }
  }

  // noisy inputs still give a physical state close to the truth
  std::uniform_real_distribution<double> noise(-0.02, 0.02);
  for (const auto& truth : {zero, bell()}) {
    const auto exact = measure_paulis(truth);
    constexpr int kDraws = 200;
    double mean = 0;
    for (int draw = 0; draw < kDraws; ++draw) {
      auto noisy = exact;
      for (auto& v : noisy) v += noise(rng);
      const auto r = tomography(noisy, 2);
      CHECK(std::abs(r.matrix().trace() - 1.0) < 1e-10);
      CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(r.matrix()).eigenvalues().minCoeff() >= -1e-12);
      mean += state_fidelity(r, truth) / kDraws;
    }
    CHECK(mean >= 0.98);
  }
}

TEST_CASE("state fidelity") {
  const auto z0 = DensityMatrix::basis(0, {2}), z1 = DensityMatrix::basis(1, {2});
  CHECK(state_fidelity(z0, z0) == doctest::Approx(1.0));
  CHECK(state_fidelity(z0, z1) == doctest::Approx(0.0));
  CHECK(state_fidelity(z0, DensityMatrix::maximally_mixed({2})) == doctest::Approx(0.5));
  CHECK(root_fidelity(z0, DensityMatrix::maximally_mixed({2})) == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(state_fidelity(z0, bell()), std::invalid_argument);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = testing::random_state(rng, {2, 2}), b = testing::random_state(rng, {2, 2});
    CHECK(state_fidelity(a, b) == doctest::Approx(state_fidelity(b, a)).epsilon(1e-9));
    CHECK(state_fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(state_fidelity(a, b) < 1.0 - 1e-6);
    // pure target: overlap ⟨ψ|ρ|ψ⟩
    Eigen::VectorXcd psi = Eigen::VectorXcd::Random(4).normalized();
    const auto pure = DensityMatrix::pure(psi, {2, 2});
    CHECK(state_fidelity(a, pure) == doctest::Approx((psi.adjoint() * a.matrix() * psi)(0).real()).epsilon(1e-9));
    double prev = state_fidelity(b, pure);
    for (double w : {0.25, 0.5, 0.75, 1.0}) {
      const DensityMatrix m(b.op() * (1 - w) + pure.op() * w);
      const double f = state_fidelity(m, pure);
      CHECK(f >= prev - 1e-12);
      prev = f;
    }
  }
}

TEST_CASE("concurrence") {
  CHECK(concurrence(DensityMatrix::basis(1, {2, 2})) == doctest::Approx(0.0));
  CHECK(concurrence(bell()) == doctest::Approx(1.0));
  CHECK(concurrence(DensityMatrix::maximally_mixed({2, 2})) == doctest::Approx(0.0));
  CHECK_THROWS_AS(concurrence(DensityMatrix::basis(0, {2})), std::invalid_argument);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = testing::random_state(rng, {2, 2});
    const auto rotated = evolve(rho, local_unitary(rng));
    CHECK(std::abs(concurrence(rotated) - concurrence(rho)) <= 1e-9);
    const auto b = evolve(bell(), local_unitary(rng));
    CHECK(concurrence(b) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("pseudo-fidelity fit") {
  std::vector<double> n, y;
  for (int k = 1; k <= 30; ++k) {
    n.push_back(k);
    y.push_back(0.5 * std::cos(2 * std::numbers::pi * k / 24.0));
  }
  const auto fit = pseudo_fidelity(n, y, 1.0);
  CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit.period == doctest::Approx(24.0).epsilon(1e-6));
  CHECK(fit.rms_residual < 1e-8);

  std::vector<double> half;
  for (double v : y) half.push_back(0.2 + 0.35 * v);
  CHECK(pseudo_fidelity(n, half, 1.0).amplitude == doctest::Approx(0.35).epsilon(1e-6));

  std::mt19937_64 rng(3);
  std::vector<double> junk;
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (std::size_t k = 0; k < n.size(); ++k) junk.push_back(u(rng));
  CHECK_THROWS_AS(pseudo_fidelity(n, junk, 1.0), NumericError);
  CHECK_THROWS_AS(pseudo_fidelity({1, 2, 3}, {0, 1, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("resonance finder") {
  const auto x = linspace(0.0, 1.0, 21);
  std::vector<double> y;
  for (double v : x) y.push_back(std::pow(v - 0.5, 2));
  const auto r = find_resonance(x, y, true);
  CHECK(r.position == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.index == 10);

  std::vector<double> off;
  for (double v : x) off.push_back(-std::pow(v - 0.53, 2));
  CHECK(find_resonance(x, off, false).position == doctest::Approx(0.53).epsilon(1e-9));

  std::vector<double> edge;
  for (double v : x) edge.push_back(v);
  CHECK_THROWS_AS(find_resonance(x, edge, true), NumericError);

  SweepResult s;
  s.axis_name = "tau";
  s.axis_values = x;
  s.add_trace("Sz", y);
  CHECK(find_resonance(s, "Sz").position == doctest::Approx(0.5));
  CHECK_THROWS_AS(s.add_trace("Sz", y), std::invalid_argument);
  CHECK_THROWS_AS(s.add_trace("short", {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(s.trace("missing"), std::invalid_argument);
}

TEST_CASE("baseline correction") {
  const auto x = linspace(0.3, 0.44, 36);
  const std::vector<double> flat(x.size(), 0.0);
  const auto f = baseline_correct(x, flat, 2);
  CHECK(f.residual == flat);
  CHECK(f.normalized == flat);

  std::vector<double> quad, dipped, dip_only;
  for (double v : x) {
    const double base = 0.2 + 1.5 * v - 2.0 * v * v;
    const double lor = -0.3 / (1 + std::pow((v - 0.364) / 0.004, 2));
    quad.push_back(base);
    dipped.push_back(base + lor);
    dip_only.push_back(lor);
  }
  const auto q = baseline_correct(x, quad, 2);
  for (double r : q.residual) CHECK(std::abs(r) < 1e-10);

  const auto d = baseline_correct(x, dipped, 2);
  const double depth = *std::max_element(d.residual.begin(), d.residual.end()) -
                       *std::min_element(d.residual.begin(), d.residual.end());
  const double true_depth = *std::max_element(dip_only.begin(), dip_only.end()) -
                            *std::min_element(dip_only.begin(), dip_only.end());
  CHECK(depth == doctest::Approx(true_depth).epsilon(0.02));
  CHECK(*std::min_element(d.normalized.begin(), d.normalized.end()) == doctest::Approx(0.0));
  CHECK(*std::max_element(d.normalized.begin(), d.normalized.end()) == doctest::Approx(1.0));
  CHECK(d.masked[std::distance(x.begin(), std::min_element(x.begin(), x.end(), [](double a, double b) {
    return std::abs(a - 0.364) < std::abs(b - 0.364);
  }))]);

  CHECK_THROWS_AS(baseline_correct({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(polyfit({1.0, 1.0, 1.0, 1.0}, {1.0, 2.0, 3.0, 4.0}, 2), NumericError);
  const auto c = polyfit({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0}, 1);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(2.0));
}

TEST_CASE("inversion-time scaling") {
  std::vector<std::pair<double, double>> exact;
  for (double a : {0.05, 0.1, 0.2, 0.35}) exact.emplace_back(a, 0.2 / a);
  const auto fit = tpi_scaling(exact);
  CHECK(fit.c == doctest::Approx(0.2).epsilon(1e-12));
  for (double r : fit.relative_residuals) CHECK(std::abs(r) < 1e-12);

  auto doubled = exact;
  for (auto& [a, t] : doubled) {
    a *= 2;
    t /= 2;
  }
  CHECK(tpi_scaling(doubled).c == doctest::Approx(fit.c));

  auto bad = exact;
  bad[1].second *= 1.5;
  CHECK_THROWS_AS(tpi_scaling(bad), NumericError);
  CHECK_THROWS_AS(tpi_scaling({{0.1, 2.0}, {0.2, 1.0}, {0.3, 0.66}}), std::invalid_argument);
}

TEST_CASE("half-gate concurrence golden value") {
  GenericSystemParams p;
  p.targets = {{1.0, 0.2}};
  const auto sys = make_generic_system(p, InitialState::Polarized);
  SequenceSpec spec;
  spec.pi_pulse = {5.0, 50.0, 0.0, 0.1};
  spec.wrapper_phase = std::numbers::pi / 2;
  spec.options.edges = EdgeTiming::Uniform;
  SimConfig cfg;
  cfg.free_evolution = FreeEvolution::Split;
  const auto rho = apply_sequence(sys, spec.compile(6, 0.5), cfg).final_state;
  CHECK(concurrence(rho) == doctest::Approx(0.9902338674).epsilon(1e-8));
}
