#include <cmath>
#include <stdexcept>

#include "ddgate/errors.hpp"
#include "ddgate/evolution.hpp"
#include "ddgate/hamiltonians.hpp"

namespace ddgate {

namespace {

constexpr double kMinTransfer = 0.99;
constexpr int kCoarsePoints = 41;
constexpr int kGoldenIterations = 40;

}  // namespace

RabiCalibration calibrate_rabi(const SpinSystem& system, double target_tpi, double carrier,
                               double dt) {
  if (!(target_tpi > 0) || !(carrier > 0) || !(dt > 0))
    throw std::invalid_argument("calibrate_rabi: t_pi, carrier and dt must be > 0");

  const auto n_targets = static_cast<Eigen::Index>(dims_product(system.dims) / system.dims[0]);
  const auto i0 = static_cast<Eigen::Index>(system.level0), i1 = static_cast<Eigen::Index>(system.level1);
  const double element = std::abs(system.drive(i1 * n_targets, i0 * n_targets));
  if (element == 0) throw NumericError("calibrate_rabi: drive does not couple the two levels");

  // Start in |0⟩ with unpolarised targets; score the population reaching |1⟩.
  const DensityMatrix& rho0 = system.fluorescence_ref;
  Matrix proj = Matrix::Zero(rho0.matrix().rows(), rho0.matrix().cols());
  for (Eigen::Index c = 0; c < n_targets; ++c) proj(i1 * n_targets + c, i1 * n_targets + c) = 1.0;

  auto transfer = [&](double omega1) {
    const DrivePulse p{omega1, carrier, 0.0, target_tpi};
    const Operator u = pulse_propagator(system.h0, p, system.drive, 0.0, dt);
    return (proj * evolve(rho0, u).matrix()).trace().real();
  };

  const double guess = 1.0 / (2.0 * target_tpi * element);
  const double lo = 0.5 * guess, hi = 1.5 * guess;
  const double step = (hi - lo) / (kCoarsePoints - 1);
  double best_w = lo, best_f = -1;
  for (int k = 0; k < kCoarsePoints; ++k) {
    const double w = lo + k * step;
    const double f = transfer(w);
    if (f > best_f) {
      best_f = f;
      best_w = w;
    }
  }

  // Golden-section refinement inside the bracketing coarse cell.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_w - step, b = best_w + step;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = transfer(c), fd = transfer(d);
  for (int it = 0; it < kGoldenIterations; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = transfer(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = transfer(d);
    }
  }
  const double w = 0.5 * (a + b);
  const double f = transfer(w);
  const RabiCalibration out = f >= best_f ? RabiCalibration{w, f} : RabiCalibration{best_w, best_f};
  if (out.transfer < kMinTransfer)
    throw NumericError("calibrate_rabi: best transfer " + std::to_string(out.transfer) +
                       " at omega1 " + std::to_string(out.omega1) + " is below 0.99");
  return out;
}

}  // namespace ddgate
