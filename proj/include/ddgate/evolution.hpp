#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddgate/analysis.hpp"
#include "ddgate/hamiltonians.hpp"
#include "ddgate/sequences.hpp"

namespace ddgate {

/// Exact: one eigendecomposition of the full H₀ per delay. Split: the ordered
/// product of the individual H₀ term exponentials (one Lie-Trotter step per
/// delay, as a gate-level free evolution would be synthesised).
enum class FreeEvolution { Exact, Split };
/// Coherent: carrier phase follows lab time since the sequence start.
/// PerPulse: every pulse starts its carrier at t = 0.
enum class CarrierPhase { Coherent, PerPulse };

struct SimConfig {
  double dt = 1e-3;
  bool record_intermediate = false;
  FreeEvolution free_evolution = FreeEvolution::Exact;
  CarrierPhase carrier_phase = CarrierPhase::Coherent;

  void validate() const;
  /// Step-size checks against a compiled sequence: ≥ 20 steps per π pulse and
  /// ≥ 10 steps per carrier period.
  void validate_for(const PulseSequence& seq) const;
};

/// Time-ordered product of exp{−i2π h [H₀ + H₁(t_k)]} with t_k at step
/// midpoints; the step h is the pulse duration divided by round(duration/dt).
Operator pulse_propagator(const Operator& h0, const DrivePulse& pulse, const Operator& drive_op,
                          double t_start, double dt);

struct SequenceRun {
  DensityMatrix final_state;
  Operator propagator;
  /// State after each element, when SimConfig::record_intermediate is set.
  std::vector<DensityMatrix> intermediate;
};

/// Propagates sequences through one system, caching H₀ spectral data and,
/// across consecutive calls, the cumulative propagators of a shared element
/// prefix. Not thread-safe; use one instance per thread.
class Propagator {
 public:
  Propagator(const SpinSystem& system, const SimConfig& cfg);

  Operator element(const SequenceElement& e, double t_start) const;
  Operator delay(double duration) const;
  /// Total propagator of the sequence (right-to-left in time order).
  Operator sequence(const PulseSequence& seq);
  SequenceRun run(const PulseSequence& seq);

  const SpinSystem& system() const { return system_; }
  const SimConfig& config() const { return cfg_; }

 private:
  const SpinSystem& system_;
  SimConfig cfg_;
  EigenDecomposition h0_eig_;
  std::vector<EigenDecomposition> term_eigs_;
  std::vector<SequenceElement> cached_elements_;
  std::vector<Matrix> cached_cumulative_;

  double pulse_time(double t_start) const;
};

SequenceRun apply_sequence(const SpinSystem& system, const PulseSequence& seq,
                           const SimConfig& cfg);

/// Everything except N and τ needed to compile a sequence.
struct SequenceSpec {
  Family family = Family::CPMG;
  DrivePulse pi_pulse;
  double wrapper_phase = 0;
  SequenceOptions options;
  double length_factor = 1.0;
  double freq_factor = 1.0;

  PulseSequence compile(int n, double tau) const;
};

/// Evaluates every observable of the system on each final state; the
/// fluorescence observable, when present, uses `system.fluorescence_ref`.
std::vector<double> evaluate_observables(const SpinSystem& system, const DensityMatrix& rho);

/// τ sweep at fixed N; `threads` > 1 splits grid points over worker threads.
SweepResult sweep_tau(const SpinSystem& system, const SequenceSpec& spec, int n,
                      const std::vector<double>& tau_grid, const SimConfig& cfg,
                      unsigned threads = 1, bool keep_states = false);

/// N sweep at fixed τ over n_values (strictly increasing, ≥ 1).
SweepResult sweep_n(const SpinSystem& system, const SequenceSpec& spec, double tau,
                    const std::vector<int>& n_values, const SimConfig& cfg,
                    bool keep_states = false);
std::vector<int> n_range(int n_min, int n_max, int step = 1);

}  // namespace ddgate
