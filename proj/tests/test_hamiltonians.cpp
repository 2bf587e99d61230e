#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ddgate/errors.hpp"
#include "ddgate/evolution.hpp"
#include "ddgate/hamiltonians.hpp"
#include "support.hpp"

using namespace ddgate;
using testing::max_abs;

namespace {

GenericSystemParams two_qubit(double azx) {
  GenericSystemParams p;
  p.omega00 = 50;
  p.targets = {{1.0, azx}};
  return p;
}

double deg(double d) { return d * std::numbers::pi / 180.0; }

}  // namespace

TEST_CASE("generic H0 examples") {
  const Operator h = generic_h0(two_qubit(0.1));
  CHECK(h.dims() == std::vector<std::size_t>{2, 2});
  CHECK(h(0, 0).real() == doctest::Approx(25.5));
  CHECK(h.hermiticity_error() < 1e-12);

  const auto e = eig_hermitian(generic_h0(two_qubit(0.0)));
  const double expect[] = {-25.5, -24.5, 24.5, 25.5};
  for (int k = 0; k < 4; ++k) CHECK(e.values(k) == doctest::Approx(expect[k]));

  // hand-written 4×4: ω₀₀Sz⊗1 + ω₀₁ 1⊗Iz + A Sz⊗Ix
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 25.5;
  m(1, 1) = 24.5;
  m(2, 2) = -24.5;
  m(3, 3) = -25.5;
  m(0, 1) = m(1, 0) = 0.05;
  m(2, 3) = m(3, 2) = -0.05;
  Eigen::SelfAdjointEigenSolver<Matrix> oracle(m);
  const auto got = eig_hermitian(generic_h0(two_qubit(0.2)));
  for (int k = 0; k < 4; ++k) CHECK(std::abs(got.values(k) - oracle.eigenvalues()(k)) < 1e-12);

  CHECK_THROWS_AS(generic_h0(two_qubit(1.5)), std::invalid_argument);
  auto bad = two_qubit(0.1);
  bad.omega00 = 0;
  CHECK_THROWS_AS(generic_h0(bad), std::invalid_argument);
}

TEST_CASE("tensor coupling with only a zx entry reduces to the scalar model") {
  GenericSystemParams t = two_qubit(0.0);
  Tensor3 a = Tensor3::Zero();
  a(2, 0) = 0.2;
  t.targets[0].coupling = a;
  CHECK(max_abs(generic_h0(t).matrix() - generic_h0(two_qubit(0.2)).matrix()) == 0.0);
}

TEST_CASE("generic H0 is the sum of its terms") {
  GenericSystemParams p;
  p.targets = {{1.0, 0.15}, {0.5, 0.1}};
  const auto terms = generic_h0_terms(p);
  CHECK(terms.size() == 5);
  Matrix sum = Matrix::Zero(8, 8);
  for (const auto& t : terms) sum += t.matrix();
  CHECK(max_abs(sum - generic_h0(p).matrix()) < 1e-15);
}

TEST_CASE("herm_propagator of H0 matches a fine-step product") {
  const Operator h = generic_h0(two_qubit(0.2));
  const Matrix step = testing::taylor_propagator(h.matrix(), 0.4 / 4096);
  Matrix prod = Matrix::Identity(4, 4);
  for (int k = 0; k < 4096; ++k) prod = (step * prod).eval();
  CHECK(max_abs(herm_propagator(h, 0.4).matrix() - prod) < 1e-8);
}

TEST_CASE("drive_h1") {
  const auto s = spin_ops(2);
  const DrivePulse p{5.0, 50.0, 0.0, 0.1};
  CHECK(max_abs(drive_h1(0.0, p, s.sx).matrix() - 5.0 * s.sx.matrix()) < 1e-15);
  CHECK(max_abs(drive_h1(0.005, p, s.sx).matrix()) < 1e-12);
  const DrivePulse shifted{5.0, 50.0, std::numbers::pi / 2, 0.1};
  CHECK(max_abs(drive_h1(0.0, shifted, s.sx).matrix()) < 1e-12);

  const double sx_norm = eig_hermitian(s.sx).values.cwiseAbs().maxCoeff();
  for (int k = 0; k < 200; ++k) {
    const Operator h = drive_h1(k * 1.37e-3, p, s.sx);
    CHECK(h.is_hermitian());
    CHECK(eig_hermitian(h).values.cwiseAbs().maxCoeff() <= 5.0 * sx_norm + 1e-12);
  }
  CHECK_THROWS_AS((DrivePulse{0, 50, 0, 0.1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((DrivePulse{5, 50, 0, 0}.validate()), std::invalid_argument);
}

TEST_CASE("NV H0 examples") {
  NvParams bare;
  bare.b0 = 0;
  bare.axx = bare.ayy = bare.azz = 0;
  const auto e0 = eig_hermitian(nv_h0(bare));
  const double expect[] = {0, 0, 2870, 2870, 2870, 2870};
  for (int k = 0; k < 6; ++k) CHECK(e0.values(k) == doctest::Approx(expect[k]).epsilon(1e-12));

  NvParams aligned;
  aligned.axx = aligned.ayy = aligned.azz = 0;
  aligned.gamma_n = 0;
  // basis (m_S = +1, 0, −1) ⊗ (↑, ↓)
  CHECK(transition_frequency(nv_h0(aligned), 2, 4) == doctest::Approx(1973.2).epsilon(1e-12));

  NvParams tilted;
  tilted.theta0 = deg(2.9);
  const Operator h = nv_h0(tilted);
  CHECK(h.dims() == std::vector<std::size_t>{3, 2});
  CHECK(h.hermiticity_error() < 1e-12);
  CHECK(std::abs(transition_frequency(h, 2, 4) - 1973.2) < 2.0);

  NvParams strong;
  strong.b0 = 120;
  CHECK_THROWS_AS(nv_h0(strong), std::invalid_argument);
  NvParams tilt;
  tilt.theta0 = deg(30);
  CHECK_THROWS_AS(nv_h0(tilt), std::invalid_argument);
}

TEST_CASE("rotated hyperfine tensor") {
  NvParams p;
  Tensor3 a = nv_rotated_tensor(p);
  CHECK(a(0, 0) == doctest::Approx(3.65));
  CHECK(a(1, 1) == doctest::Approx(3.65));
  CHECK(a(2, 2) == doctest::Approx(3.03));
  CHECK(a(0, 2) == 0.0);

  p.theta0 = std::numbers::pi / 2;
  a = nv_rotated_tensor(p);
  CHECK(a(0, 0) == doctest::Approx(3.03));
  CHECK(a(2, 2) == doctest::Approx(3.65));
  CHECK(std::abs(a(2, 0)) < 1e-15);

  p.theta0 = deg(2.9);
  a = nv_rotated_tensor(p);
  CHECK(a(2, 0) == doctest::Approx(0.03133).epsilon(1e-3));
  CHECK(a(0, 2) == a(2, 0));
}

TEST_CASE("crystal and field frames share the spectrum") {
  for (double theta : {0.0, 1.0, 2.9, 5.0}) {
    for (double b : {10.0, 32.0, 60.0}) {
      NvParams p;
      p.theta0 = deg(theta);
      p.b0 = b;
      const auto crystal = eig_hermitian(nv_h0(p)).values;
      const auto field = eig_hermitian(nv_h0_field_frame(p)).values;
      CHECK((crystal - field).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("transition_frequency labelling") {
  CHECK(transition_frequency(generic_h0(two_qubit(0.0)), 0, 2) == doctest::Approx(50.0));
  CHECK_THROWS_AS(transition_frequency(generic_h0(two_qubit(0.0)), 0, 4), std::invalid_argument);
  // degenerate pair mixed half-half
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  CHECK_THROWS_AS(transition_frequency(Operator(m), 0, 1), NumericError);
}

TEST_CASE("spin systems") {
  const auto g = make_generic_system(two_qubit(0.2), InitialState::Polarized);
  CHECK(g.dims == std::vector<std::size_t>{2, 2});
  CHECK(expval(g.initial, g.observable("Sz").op) == doctest::Approx(0.5));
  CHECK(expval(g.initial, g.observable("Iz1").op) == doctest::Approx(0.5));
  CHECK(g.phase_sign == 1.0);
  CHECK_THROWS_AS(g.observable("nope"), std::invalid_argument);

  NvParams p;
  p.theta0 = deg(2.9);
  const auto nv = make_nv_system(p, InitialState::MixedTarget);
  CHECK(nv.dims == std::vector<std::size_t>{3, 2});
  CHECK(expval(nv.initial, nv.observable("Iz").op) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fluorescence(nv.fluorescence_ref, nv.initial) == doctest::Approx(1.0));
  CHECK(nv.phase_sign == -1.0);
  CHECK(nv.central_transition_frequency() == doctest::Approx(1975.67).epsilon(1e-4));
}

TEST_CASE("Rabi calibration") {
  const auto g = make_generic_system(two_qubit(0.1), InitialState::Polarized);
  const auto cal = calibrate_rabi(g, 0.1, 50.0, 1e-3);
  CHECK(cal.omega1 == doctest::Approx(5.0).epsilon(0.02));
  CHECK(cal.transfer >= 0.99);

  NvParams p;
  p.theta0 = deg(2.9);
  const auto nv = make_nv_system(p, InitialState::MixedTarget);
  const double carrier = nv.central_transition_frequency();
  const auto a = calibrate_rabi(nv, 0.01285, carrier, 1e-5);
  const double spin_half = 1.0 / (2 * 0.01285);
  CHECK(a.omega1 >= spin_half / std::sqrt(2.0) * 0.9);
  CHECK(a.omega1 <= spin_half / std::sqrt(2.0) * 1.1);
  CHECK(a.transfer >= 0.99);
  const auto b = calibrate_rabi(nv, 2 * 0.01285, carrier, 1e-5);
  CHECK(b.omega1 == doctest::Approx(a.omega1 / 2).epsilon(0.02));

  // far off resonance nothing transfers
  CHECK_THROWS_AS(calibrate_rabi(g, 0.1, 40.0, 1e-3), NumericError);
  CHECK_THROWS_AS(calibrate_rabi(g, -0.1, 50.0, 1e-3), std::invalid_argument);
}
