#include "ddgate/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ddgate {

namespace {
// Rounding slack below which a negative edge gap is treated as zero.
constexpr double kGapSlack = 1e-12;
}  // namespace

std::string to_string(Family f) { return f == Family::CPMG ? "cpmg" : "xyn"; }

Family family_from_string(const std::string& s) {
  if (s == "cpmg" || s == "CPMG") return Family::CPMG;
  if (s == "xyn" || s == "XYN" || s == "xy") return Family::XYN;
  throw std::invalid_argument("unknown sequence family '" + s + "'");
}

double nominal_angle_value(NominalAngle a) {
  switch (a) {
    case NominalAngle::HalfPi: return std::numbers::pi / 2;
    case NominalAngle::Pi: return std::numbers::pi;
    case NominalAngle::ThreeHalvesPi: return 1.5 * std::numbers::pi;
  }
  return 0;
}

double element_duration(const SequenceElement& e) {
  return std::visit(
      [](const auto& x) {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Delay>)
          return x.duration;
        else
          return x.pulse.duration;
      },
      e);
}

double PulseSequence::total_duration() const {
  double t = 0;
  for (const auto& e : elements) t += element_duration(e);
  return t;
}

int PulseSequence::count_pi_pulses() const {
  return static_cast<int>(std::count_if(elements.begin(), elements.end(), [](const auto& e) {
    const auto* p = std::get_if<PulseElement>(&e);
    return p && p->angle == NominalAngle::Pi;
  }));
}

double PulseSequence::shortest_pi_duration() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : elements)
    if (const auto* p = std::get_if<PulseElement>(&e); p && p->angle == NominalAngle::Pi)
      best = std::min(best, p->pulse.duration);
  return best;
}

PulseSequence compile_sequence(Family family, int n, double tau, const DrivePulse& pi_pulse,
                               double wrapper_phase, const SequenceOptions& options,
                               double length_factor, double freq_factor) {
  if (n < 1) throw std::invalid_argument("compile: pulse count must be >= 1");
  pi_pulse.validate();
  if (!(length_factor > 0 && length_factor < 2) || !(freq_factor > 0 && freq_factor < 2))
    throw std::invalid_argument("compile: error factors must lie in (0, 2)");

  const double t_pi = pi_pulse.duration * length_factor;
  const double t_half = 0.5 * t_pi;
  const double carrier = pi_pulse.omegap * freq_factor;

  const double interior = tau - t_pi;
  double edge = options.edges == EdgeTiming::Symmetric ? 0.5 * tau - 0.5 * t_pi - 0.5 * t_half
                                                       : interior;
  if (!(interior > 0))
    throw std::invalid_argument("compile: tau " + std::to_string(tau) +
                                " leaves no free evolution between pulses of length " +
                                std::to_string(t_pi));
  if (edge < 0) {
    if (edge < -kGapSlack)
      throw std::invalid_argument("compile: tau " + std::to_string(tau) +
                                  " too small for the edge gaps");
    edge = 0;
  }

  auto make_pulse = [&](NominalAngle angle, double phase) {
    DrivePulse p = pi_pulse;
    p.omegap = carrier;
    p.phase = phase;
    p.duration = t_pi * nominal_angle_value(angle) / std::numbers::pi;
    return PulseElement{p, angle};
  };

  PulseSequence seq;
  seq.family = family;
  seq.n_pulses = n;
  seq.tau = tau;
  seq.error_length_factor = length_factor;
  seq.error_freq_factor = freq_factor;
  seq.pi_pulse = pi_pulse;
  seq.wrapper_phase = wrapper_phase;
  seq.options = options;

  auto& els = seq.elements;
  els.reserve(2 * static_cast<std::size_t>(n) + 3);
  els.emplace_back(make_pulse(NominalAngle::HalfPi, wrapper_phase));
  els.emplace_back(Delay{edge});
  for (int k = 0; k < n; ++k) {
    const double phase = (family == Family::XYN && k % 2 == 1) ? std::numbers::pi / 2 : 0.0;
    els.emplace_back(make_pulse(NominalAngle::Pi, phase));
    els.emplace_back(Delay{k + 1 < n ? interior : edge});
  }
  const bool three_halves = options.closing == ClosingRule::ThreeHalvesWhenOddBlocks &&
                            n % 2 == 0 && (n / 2) % 2 == 1;
  els.emplace_back(make_pulse(three_halves ? NominalAngle::ThreeHalvesPi : NominalAngle::HalfPi,
                              wrapper_phase));
  return seq;
}

PulseSequence compile_cpmg(int n, double tau, const DrivePulse& pi_pulse, double wrapper_phase,
                           const SequenceOptions& options) {
  return compile_sequence(Family::CPMG, n, tau, pi_pulse, wrapper_phase, options);
}

PulseSequence compile_xyn(int n, double tau, const DrivePulse& pi_pulse, double wrapper_phase,
                          const SequenceOptions& options) {
  return compile_sequence(Family::XYN, n, tau, pi_pulse, wrapper_phase, options);
}

PulseSequence inject_errors(const PulseSequence& seq, double length_factor, double freq_factor) {
  if (!(length_factor > 0 && length_factor < 2) || !(freq_factor > 0 && freq_factor < 2))
    throw std::invalid_argument("inject_errors: factors must lie in (0, 2)");
  return compile_sequence(seq.family, seq.n_pulses, seq.tau, seq.pi_pulse, seq.wrapper_phase,
                          seq.options, seq.error_length_factor * length_factor,
                          seq.error_freq_factor * freq_factor);
}

}  // namespace ddgate
