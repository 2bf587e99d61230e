#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddgate/analysis.hpp"
#include "ddgate/config.hpp"

namespace ddgate {

inline constexpr const char* kVersion = "1.0.0";

struct RunOptions {
  std::string out_dir = "out";
  unsigned threads = 1;
};

struct OutputFile {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string config_hash;
  std::string version = kVersion;
  std::string started_at;
  double wall_clock_seconds = 0;
  std::vector<OutputFile> outputs;
  nlohmann::json metrics = nlohmann::json::object();
  std::optional<GateMetrics> gate;

  nlohmann::json to_json() const;
};

/// The π pulse of the config, with "calibrate"/"auto" fields resolved
/// against the given system.
DrivePulse resolve_pi_pulse(const ExperimentConfig& cfg, const SpinSystem& system);
SequenceSpec make_sequence_spec(const ExperimentConfig& cfg, const DrivePulse& pi_pulse,
                                std::optional<Family> family = std::nullopt);

/// Runs one configured sweep without writing anything.
SweepResult run_sweep(const ExperimentConfig& cfg, const SweepConfig& sweep, unsigned threads,
                      bool keep_states);

/// Executes sweeps, tomography and scaling blocks (and the error map when
/// present); writes CSVs plus `<name>_manifest.json` into opts.out_dir.
RunManifest run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);
/// Executes only the error-map block.
RunManifest run_errmap(const ExperimentConfig& cfg, const RunOptions& opts);

struct ErrmapResult {
  std::vector<double> length_factors;
  std::vector<double> freq_factors;
  /// rows = length factors, columns = frequency factors; empty = fit failed.
  std::vector<std::vector<std::optional<double>>> cells;
};
ErrmapResult compute_errmap(const ExperimentConfig& cfg, unsigned threads);

struct ScalingPoint {
  double coupling = 0;
  int n_max = 0;
  double period = 0;
  double t_pi = 0;
  double pseudo_fidelity = 0;
};
std::vector<ScalingPoint> compute_scaling(const ExperimentConfig& cfg);

/// 12 significant digits, dot decimal separator.
std::string format_number(double v);
std::string sweep_csv(const SweepResult& r);

}  // namespace ddgate
