#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddgate/algebra.hpp"

namespace ddgate {

struct Provenance {
  std::string config_hash;
  std::string timestamp;
};

/// Expectation traces over one sweep axis; trace order is column order.
struct SweepResult {
  std::string axis_name;
  std::vector<double> axis_values;
  std::vector<std::pair<std::string, std::vector<double>>> traces;
  Provenance provenance;
  /// Final states per axis point, filled only on request.
  std::vector<DensityMatrix> states;

  const std::vector<double>& trace(const std::string& label) const;
  bool has_trace(const std::string& label) const;
  void add_trace(std::string label, std::vector<double> values);
  /// Throws when a trace length differs from the axis length.
  void validate() const;
};

struct GateMetrics {
  double pseudo_fidelity = 0;
  double t_pi = 0;
  int n_pi = 0;
  double state_fidelity = 0;
  double concurrence_at_half = 0;
};

double expval(const DensityMatrix& rho, const Operator& obs);
/// Tr(2 ρ₀ ρ_f)
double fluorescence(const DensityMatrix& rho0, const DensityMatrix& rhof);

/// Pauli-product labels for n qubits in lexicographic order over {I,X,Y,Z},
/// identity excluded (4ⁿ − 1 entries).
std::vector<std::string> pauli_labels(std::size_t n_qubits);
Operator pauli_product(const std::string& label);
/// Exact expectation values of every label of pauli_labels(n).
std::vector<double> measure_paulis(const DensityMatrix& rho);
/// Linear inversion followed by eigenvalue clipping and renormalisation.
DensityMatrix tomography(const std::vector<double>& expectations, std::size_t n_qubits);

/// Uhlmann fidelity (Tr√(√ρ σ √ρ))².
double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// Tr√(√ρ σ √ρ), the square root of state_fidelity.
double root_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double concurrence(const DensityMatrix& rho);

struct CosineFit {
  double amplitude = 0;  // 2|b| / range
  double period = 0;     // full oscillation period in pulses
  double offset = 0;
  double b = 0;
  double phase = 0;
  double rms_residual = 0;  // relative to range
};

/// Least-squares fit of a + b·cos(2πn/T + φ₀) over (n, y); `range` is the
/// observable's full span. Inversion period is period/2.
CosineFit pseudo_fidelity(const std::vector<double>& n, const std::vector<double>& y,
                          double range);

struct Resonance {
  double position = 0;
  double value = 0;
  std::size_t index = 0;
};

/// Global extremum of the trace (minimum when `minimum`), parabola-refined.
Resonance find_resonance(const std::vector<double>& x, const std::vector<double>& y,
                         bool minimum = true);
Resonance find_resonance(const SweepResult& sweep, const std::string& label, bool minimum = true);

struct BaselineResult {
  std::vector<double> baseline;
  std::vector<double> residual;    // y − baseline
  std::vector<double> normalized;  // residual rescaled to a [0,1] span
  std::vector<bool> masked;
};

BaselineResult baseline_correct(const std::vector<double>& x, const std::vector<double>& y,
                                int order);

struct ScalingFit {
  double c = 0;
  std::vector<double> relative_residuals;
};

/// Least-squares fit of T_π = c / A over (A, T_π) pairs.
ScalingFit tpi_scaling(const std::vector<std::pair<double, double>>& fits);

/// Least-squares polynomial coefficients (ascending powers).
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int order,
                            const std::vector<bool>* exclude = nullptr);

}  // namespace ddgate
