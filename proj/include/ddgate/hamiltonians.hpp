#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ddgate/algebra.hpp"

namespace ddgate {

using Tensor3 = Eigen::Matrix3d;

/// One target qubit of the minimal model: Larmor frequency plus either the
/// scalar zx coupling (A_zx Ŝz Îx) or a full coupling tensor (Ŝ·A·Î).
struct TargetQubit {
  double omega0 = 1.0;
  std::variant<double, Tensor3> coupling = 0.0;
};

struct GenericSystemParams {
  double omega00 = 50.0;
  std::vector<TargetQubit> targets;
  /// Enforce A_zx ≤ ω₀ⱼ for scalar couplings (Zeeman-dominated regime).
  bool require_weak_coupling = true;

  void validate() const;
};

/// Square drive pulse ω₁ cos(2π ω_p t + φ) of the given duration.
struct DrivePulse {
  double omega1 = 0;
  double omegap = 0;
  double phase = 0;
  double duration = 0;

  void validate() const;
};

/// ¹⁵NV ground-state parameters. Frequencies in MHz, field in mT, times in µs.
struct NvParams {
  double d_zfs = 2.87e3;
  double gamma_e = -28.025;
  double gamma_n = -4.316e-3;
  double axx = 3.65;
  double ayy = 3.65;
  double azz = 3.03;
  double b0 = 32.0;
  double theta0 = 0.0;  // radians

  void validate() const;
};

/// Minimal model H₀; dims [2, 2, …].
Operator generic_h0(const GenericSystemParams& params);
/// The additive terms of generic_h0 in application order: central Zeeman,
/// then per target its Zeeman and coupling term.
std::vector<Operator> generic_h0_terms(const GenericSystemParams& params);

/// ω₁ cos(2π ω_p t + φ) · drive_op
Operator drive_h1(double t, const DrivePulse& pulse, const Operator& drive_op);

/// NV Hamiltonian in the crystal frame, dims [3, 2].
Operator nv_h0(const NvParams& params);
std::vector<Operator> nv_h0_terms(const NvParams& params);
/// Hyperfine tensor expressed in the frame whose z axis follows B₀.
Tensor3 nv_rotated_tensor(const NvParams& params);
/// The same NV Hamiltonian written in the field-aligned frame: zero-field
/// term along the tilted NV axis, aligned Zeeman terms, full A′ coupling.
Operator nv_h0_field_frame(const NvParams& params);

/// |E_to − E_from| with eigenstates labelled by their largest squared overlap
/// with the product basis states `from_index` / `to_index`.
double transition_frequency(const Operator& h0, std::size_t from_index, std::size_t to_index);

struct Observable {
  std::string label;
  Operator op;
  double lo = -0.5;  // full range of the expectation value
  double hi = 0.5;
};

enum class InitialState { Polarized, MixedTarget };

/// Everything needed to propagate one physical model.
struct SpinSystem {
  std::string model;  // "generic" | "nv"
  std::string time_unit;
  std::string freq_unit;
  std::vector<std::size_t> dims;
  Operator h0;
  std::vector<Operator> h0_terms;
  /// 2·Ŝx of the central site, so ω₁ is the Rabi frequency of a spin-1/2.
  Operator drive;
  DensityMatrix initial;
  /// Reference state for the fluorescence observable Tr(2 ρ_ref ρ).
  DensityMatrix fluorescence_ref;
  std::vector<Observable> observables;
  /// Computational |0⟩, |1⟩ of the central site (level indices).
  std::size_t level0 = 0;
  std::size_t level1 = 1;
  /// +1 when |0⟩ is the upper level of the addressed transition, −1 otherwise;
  /// maps computational-frame axis phases onto lab-frame carrier phases.
  double phase_sign = 1.0;

  const Observable& observable(const std::string& label) const;
  /// Product-basis index of central level `central` with all targets in level `target`.
  std::size_t basis_index(std::size_t central, std::size_t target_level = 0) const;
  /// Mean |0⟩→|1⟩ frequency over the target-level configurations.
  double central_transition_frequency() const;
};

SpinSystem make_generic_system(const GenericSystemParams& params, InitialState init);
SpinSystem make_nv_system(const NvParams& params, InitialState init);

struct RabiCalibration {
  double omega1 = 0;
  double transfer = 0;
};

/// Finds ω₁ such that a pulse of length `target_tpi` at `carrier` maximises
/// the |0⟩→|1⟩ population transfer of the central site. Throws NumericError
/// when the best transfer stays below 0.99.
RabiCalibration calibrate_rabi(const SpinSystem& system, double target_tpi, double carrier,
                               double dt);

}  // namespace ddgate
