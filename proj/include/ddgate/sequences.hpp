#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ddgate/hamiltonians.hpp"

namespace ddgate {

enum class Family { CPMG, XYN };
enum class NominalAngle { HalfPi, Pi, ThreeHalvesPi };

/// Symmetric: edge gaps put τ/2 between pulse centres. Uniform: every gap,
/// edges included, is τ − t_π.
enum class EdgeTiming { Symmetric, Uniform };
/// ThreeHalvesWhenOddBlocks closes with 3π/2 when N is even and N/2 is odd.
enum class ClosingRule { HalfPi, ThreeHalvesWhenOddBlocks };

std::string to_string(Family f);
Family family_from_string(const std::string& s);
double nominal_angle_value(NominalAngle a);

struct Delay {
  double duration = 0;
  bool operator==(const Delay&) const = default;
};

/// `pulse.phase` is the rotation-axis phase in the computational frame
/// (0 ↔ x, π/2 ↔ y).
struct PulseElement {
  DrivePulse pulse;
  NominalAngle angle = NominalAngle::Pi;
  double axis_phase() const { return pulse.phase; }
  bool operator==(const PulseElement& o) const {
    return angle == o.angle && pulse.omega1 == o.pulse.omega1 &&
           pulse.omegap == o.pulse.omegap && pulse.phase == o.pulse.phase &&
           pulse.duration == o.pulse.duration;
  }
};

using SequenceElement = std::variant<Delay, PulseElement>;

double element_duration(const SequenceElement& e);

struct SequenceOptions {
  EdgeTiming edges = EdgeTiming::Symmetric;
  ClosingRule closing = ClosingRule::HalfPi;
};

struct PulseSequence {
  std::vector<SequenceElement> elements;
  Family family = Family::CPMG;
  int n_pulses = 0;
  double tau = 0;
  double error_length_factor = 1.0;  // t_p / t_π
  double error_freq_factor = 1.0;    // ω_p / ω_p,nominal
  /// Nominal π pulse before error injection.
  DrivePulse pi_pulse;
  double wrapper_phase = 0;
  SequenceOptions options;

  double total_duration() const;
  int count_pi_pulses() const;
  /// Smallest π-pulse duration in the compiled elements.
  double shortest_pi_duration() const;
};

PulseSequence compile_sequence(Family family, int n, double tau, const DrivePulse& pi_pulse,
                               double wrapper_phase, const SequenceOptions& options = {},
                               double length_factor = 1.0, double freq_factor = 1.0);

PulseSequence compile_cpmg(int n, double tau, const DrivePulse& pi_pulse, double wrapper_phase,
                           const SequenceOptions& options = {});
/// Non-antisymmetrised x/y alternation: phases 0, π/2, 0, π/2, …
PulseSequence compile_xyn(int n, double tau, const DrivePulse& pi_pulse, double wrapper_phase,
                          const SequenceOptions& options = {});

/// Scales every pulse duration by `length_factor` and every carrier by
/// `freq_factor` (composing with factors already applied), re-deriving the
/// delays so π-pulse centres stay τ apart.
PulseSequence inject_errors(const PulseSequence& seq, double length_factor, double freq_factor);

}  // namespace ddgate
