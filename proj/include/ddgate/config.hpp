#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddgate/evolution.hpp"
#include "ddgate/hamiltonians.hpp"
#include "ddgate/sequences.hpp"

namespace ddgate {

/// Either an explicit value list or an inclusive arithmetic progression.
struct Grid {
  std::vector<double> values;
  std::optional<double> start, stop, step;

  std::vector<double> expand() const;
};

struct IntRange {
  int min = 1;
  int max = 1;
  int step = 1;
};

struct SystemConfig {
  std::string model = "generic";  // "generic" | "nv"
  GenericSystemParams generic;
  NvParams nv;
  double theta0_deg = 0;  // kept in degrees so the config round-trips exactly
};

struct PulseConfig {
  double t_pi = 0.1;
  std::optional<double> omega1;   // empty: calibrate
  std::optional<double> carrier;  // empty: mean |0⟩→|1⟩ frequency of H₀
};

struct SequenceConfig {
  Family family = Family::CPMG;
  double wrapper_phase = 1.5707963267948966;
  EdgeTiming edges = EdgeTiming::Symmetric;
  ClosingRule closing = ClosingRule::HalfPi;
  double length_factor = 1.0;
  double freq_factor = 1.0;
};

/// Per-site ideal state: one level is a basis state, several an equal mixture.
struct SiteState {
  std::vector<std::size_t> levels;
};

struct ExtremumMetric {
  std::string trace;
  bool minimum = true;
};

struct ResonanceMetric {
  std::string trace;
  bool minimum = true;
  std::vector<std::pair<double, double>> windows;
  std::optional<int> baseline_order;
};

struct FidelityMetric {
  double at = 0;
  std::vector<std::size_t> sites;  // kept sites, ascending
  std::vector<SiteState> ideal;    // one entry per kept site
};

struct MetricsConfig {
  std::optional<std::string> pseudo_fidelity;  // trace label
  std::optional<ExtremumMetric> extremum;
  std::optional<ResonanceMetric> resonances;
  std::vector<FidelityMetric> state_fidelity;
  std::optional<double> concurrence_at;

  bool needs_states() const { return !state_fidelity.empty() || concurrence_at.has_value(); }
};

struct SweepConfig {
  std::string id;
  std::optional<Family> family;
  std::optional<InitialState> initial_state;
  std::optional<int> n;              // τ sweeps
  std::optional<Grid> tau_range;
  std::optional<double> tau;         // N sweeps
  std::optional<IntRange> n_range;
  MetricsConfig metrics;
};

struct ErrmapConfig {
  Family family = Family::XYN;
  double tau = 0.5;
  IntRange n_range;
  std::string trace;
  Grid length_factors;
  Grid freq_factors;
};

struct TomographyConfig {
  std::string sweep;
  double at = 0;
  double noise = 0;
  int draws = 1;
  std::vector<SiteState> ideal;  // optional, all qubits
};

struct ScalingConfig {
  std::vector<double> couplings;
  double tau = 0.5;
  double n_max_scale = 13;  // N sweep runs to ceil(n_max_scale / A)
  std::string trace = "Iz1";
};

struct ExperimentConfig {
  std::string name;
  std::string description;
  SystemConfig system;
  InitialState initial_state = InitialState::Polarized;
  PulseConfig pulse;
  SimConfig sim;
  SequenceConfig sequence;
  std::vector<SweepConfig> sweeps;
  std::optional<ErrmapConfig> errmap;
  std::vector<TomographyConfig> tomography;
  std::optional<ScalingConfig> scaling;
  std::uint64_t seed = 0;
};

/// Parses and validates; schema problems raise ConfigError naming the line
/// (for syntax errors) or the field path.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Canonical JSON text (sorted keys, full-precision numbers).
std::string serialize_config(const ExperimentConfig& cfg);
/// SHA-256 over the canonical form without name/description.
std::string config_hash(const ExperimentConfig& cfg);
std::string sha256_hex(const std::string& bytes);

SpinSystem build_system(const ExperimentConfig& cfg, InitialState init);

struct Preset {
  std::string name;
  std::string description;
  std::string json;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

}  // namespace ddgate
