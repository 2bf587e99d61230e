#include <stdexcept>

#include "ddgate/config.hpp"
#include "ddgate/errors.hpp"

namespace ddgate {

namespace {

const char* kFig1c = R"json({
  "name": "fig1c",
  "description": "CPMG-10 tau sweep of the two-qubit model (A_zx = 0.1): resonances at odd multiples of 0.5",
  "system": {"model": "generic", "omega00": 50, "targets": [{"omega0": 1, "azx": 0.1}]},
  "initial_state": "polarized",
  "pulse": {"t_pi": 0.1, "omega1": 5, "carrier": 50},
  "sim": {"dt": 0.001, "free_evolution": "exact"},
  "sequence": {"family": "cpmg", "edges": "symmetric"},
  "sweeps": [{
    "id": "tau", "n": 10, "tau_range": {"start": 0.3, "stop": 3.8, "step": 0.01},
    "metrics": {"resonances": {"trace": "Sz", "kind": "max",
                               "windows": [[0.3, 0.7], [1.3, 1.7], [2.3, 2.7], [3.3, 3.7]]}}
  }]
})json";

const char* kFig2a = R"json({
  "name": "fig2a",
  "description": "CPMG-N tau sweeps (N = 4, 8, 12) around the first resonance, A_zx = 0.2",
  "system": {"model": "generic", "omega00": 50, "targets": [{"omega0": 1, "azx": 0.2}]},
  "initial_state": "polarized",
  "pulse": {"t_pi": 0.1, "omega1": 5, "carrier": 50},
  "sim": {"dt": 0.001, "free_evolution": "split"},
  "sequence": {"family": "cpmg", "edges": "uniform"},
  "sweeps": [
    {"id": "n4", "n": 4, "tau_range": {"start": 0.3, "stop": 0.7, "step": 0.005}},
    {"id": "n8", "n": 8, "tau_range": {"start": 0.3, "stop": 0.7, "step": 0.005}},
    {"id": "n12", "n": 12, "tau_range": {"start": 0.3, "stop": 0.7, "step": 0.005},
     "metrics": {"extremum": {"trace": "Iz1", "kind": "min"}}}
  ]
})json";

const char* kFig2b = R"json({
  "name": "fig2b",
  "description": "Rabi-like oscillation versus N at tau = 0.5, A_zx = 0.2: inversion at N = 12",
  "system": {"model": "generic", "omega00": 50, "targets": [{"omega0": 1, "azx": 0.2}]},
  "initial_state": "polarized",
  "pulse": {"t_pi": 0.1, "omega1": 5, "carrier": 50},
  "sim": {"dt": 0.001, "free_evolution": "split"},
  "sequence": {"family": "cpmg", "edges": "uniform"},
  "sweeps": [{
    "id": "n", "tau": 0.5, "n_range": {"min": 1, "max": 30},
    "metrics": {
      "pseudo_fidelity": {"trace": "Iz1"},
      "state_fidelity": [{"at": 12, "sites": [1], "ideal": [1]},
                         {"at": 12, "sites": [0, 1], "ideal": [0, 1]}],
      "concurrence": {"at": 6}
    }
  }]
})json";

const char* kFig3 = R"json({
  "name": "fig3-tomo",
  "description": "Two-qubit tomography at the half gate (N = 6, noisy inputs) and the full gate (N = 12)",
  "system": {"model": "generic", "omega00": 50, "targets": [{"omega0": 1, "azx": 0.2}]},
  "initial_state": "polarized",
  "pulse": {"t_pi": 0.1, "omega1": 5, "carrier": 50},
  "sim": {"dt": 0.001, "free_evolution": "split"},
  "sequence": {"family": "cpmg", "edges": "uniform"},
  "sweeps": [{"id": "n", "tau": 0.5, "n_range": {"min": 1, "max": 12},
              "metrics": {"concurrence": {"at": 6}}}],
  "tomography": [
    {"sweep": "n", "at": 6, "noise": 0.02, "draws": 50},
    {"sweep": "n", "at": 12, "noise": 0, "draws": 1, "ideal": [0, 1]}
  ],
  "seed": 20240101
})json";

const char* kFig4 = R"json({
  "name": "fig4-errors",
  "description": "XYN pseudo-fidelity map over pulse length and carrier errors (13 x 7 grid)",
  "system": {"model": "generic", "omega00": 50, "targets": [{"omega0": 1, "azx": 0.2}]},
  "initial_state": "polarized",
  "pulse": {"t_pi": 0.1, "omega1": 5, "carrier": 50},
  "sim": {"dt": 0.001, "free_evolution": "split"},
  "sequence": {"family": "xyn", "edges": "uniform"},
  "errmap": {
    "family": "xyn", "tau": 0.5, "n_range": {"min": 1, "max": 40}, "trace": "Iz1",
    "length_factors": {"start": 0.7, "stop": 1.3, "step": 0.05},
    "freq_factors": {"start": 0.97, "stop": 1.03, "step": 0.01}
  }
})json";

const char* kFig4Cpmg = R"json({
  "name": "fig4-errors-cpmg",
  "description": "CPMG counterpart of fig4-errors: sharp maximum at the error-free corner",
  "system": {"model": "generic", "omega00": 50, "targets": [{"omega0": 1, "azx": 0.2}]},
  "initial_state": "polarized",
  "pulse": {"t_pi": 0.1, "omega1": 5, "carrier": 50},
  "sim": {"dt": 0.001, "free_evolution": "split"},
  "sequence": {"family": "cpmg", "edges": "uniform"},
  "errmap": {
    "family": "cpmg", "tau": 0.5, "n_range": {"min": 1, "max": 40}, "trace": "Iz1",
    "length_factors": {"start": 0.7, "stop": 1.3, "step": 0.05},
    "freq_factors": {"start": 0.97, "stop": 1.03, "step": 0.01}
  }
})json";

const char* kFig5 = R"json({
  "name": "fig5-3qubit",
  "description": "Three-qubit model: selective resonances and inversions of target 1 (tau 0.5) and target 2 (tau 1.0)",
  "system": {"model": "generic", "omega00": 50,
             "targets": [{"omega0": 1, "azx": 0.15}, {"omega0": 0.5, "azx": 0.1}]},
  "initial_state": "polarized",
  "pulse": {"t_pi": 0.1, "omega1": 5, "carrier": 50},
  "sim": {"dt": 0.001, "free_evolution": "split"},
  "sequence": {"family": "cpmg", "edges": "uniform"},
  "sweeps": [
    {"id": "tau", "n": 10, "tau_range": {"start": 0.3, "stop": 1.1, "step": 0.01}},
    {"id": "target1", "tau": 0.5, "n_range": {"min": 1, "max": 30},
     "metrics": {"pseudo_fidelity": {"trace": "Iz1"},
                 "state_fidelity": [{"at": 16, "sites": [1], "ideal": [1]},
                                    {"at": 16, "sites": [2], "ideal": [0]}]}},
    {"id": "target2", "tau": 1.0, "n_range": {"min": 1, "max": 30},
     "metrics": {"state_fidelity": [{"at": 11, "sites": [2], "ideal": [1]},
                                    {"at": 11, "sites": [1], "ideal": [0]}]}}
  ]
})json";

const char* kNvSpectrum = R"json({
  "name": "nv-xyn-spectrum",
  "description": "15NV XY8 tau sweep at B0 = 32 mT, theta0 = 2.9 deg: nuclear resonance near 0.364 us",
  "system": {"model": "nv", "b0": 32, "theta0_deg": 2.9},
  "initial_state": "mixed-target",
  "pulse": {"t_pi": 0.01285, "omega1": "calibrate", "carrier": "auto"},
  "sim": {"dt": 1e-05},
  "sequence": {"family": "xyn", "edges": "symmetric", "closing": "three-halves-odd-blocks"},
  "sweeps": [{
    "id": "tau", "n": 8, "tau_range": {"start": 0.3, "stop": 0.44, "step": 0.004},
    "metrics": {"resonances": {"trace": "F", "kind": "max", "windows": [[0.3, 0.44]]}}
  }]
})json";

const char* kNvGate = R"json({
  "name": "nv-ddgate",
  "description": "15NV XYN gate at tau = 0.364 us: nuclear inversion at N = 24",
  "system": {"model": "nv", "b0": 32, "theta0_deg": 2.9},
  "initial_state": "polarized",
  "pulse": {"t_pi": 0.01285, "omega1": "calibrate", "carrier": "auto"},
  "sim": {"dt": 1e-05},
  "sequence": {"family": "xyn", "edges": "symmetric", "closing": "three-halves-odd-blocks"},
  "sweeps": [{
    "id": "n", "tau": 0.364, "n_range": {"min": 1, "max": 48},
    "metrics": {"pseudo_fidelity": {"trace": "Iz"}, "extremum": {"trace": "Iz", "kind": "min"}}
  }]
})json";

const char* kNvPolarize = R"json({
  "name": "nv-polarize",
  "description": "15NV polarization transfer with CPMG at tau = 0.3534 us from a mixed nucleus; XYN control",
  "system": {"model": "nv", "b0": 32, "theta0_deg": 2.9},
  "initial_state": "mixed-target",
  "pulse": {"t_pi": 0.01285, "omega1": "calibrate", "carrier": "auto"},
  "sim": {"dt": 1e-05},
  "sequence": {"family": "cpmg", "edges": "symmetric", "closing": "half-pi"},
  "sweeps": [
    {"id": "cpmg", "tau": 0.3534, "n_range": {"min": 1, "max": 40},
     "metrics": {"extremum": {"trace": "Iz", "kind": "max"},
                 "state_fidelity": [{"at": 27, "sites": [0, 1], "ideal": [{"mix": [1, 2]}, 0]}]}},
    {"id": "xyn-control", "family": "xyn", "tau": 0.3534, "n_range": {"min": 1, "max": 40},
     "metrics": {"extremum": {"trace": "Iz", "kind": "max"}}}
  ]
})json";

const char* kScaling = R"json({
  "name": "appendixB-scaling",
  "description": "Inversion time versus coupling strength, fitted to T_pi = c / A_zx",
  "system": {"model": "generic", "omega00": 50, "targets": [{"omega0": 1, "azx": 0.2}]},
  "initial_state": "polarized",
  "pulse": {"t_pi": 0.1, "omega1": 5, "carrier": 50},
  "sim": {"dt": 0.001, "free_evolution": "split"},
  "sequence": {"family": "cpmg", "edges": "uniform"},
  "scaling": {"couplings": [0.05, 0.1, 0.15, 0.2, 0.25, 0.35], "tau": 0.5, "n_max_scale": 13,
              "trace": "Iz1"}
})json";

std::vector<Preset> build() {
  std::vector<Preset> out;
  for (const char* text : {kFig1c, kFig2a, kFig2b, kFig3, kFig4, kFig4Cpmg, kFig5, kNvSpectrum,
                           kNvGate, kNvPolarize, kScaling}) {
    const ExperimentConfig c = parse_config(text);
    out.push_back({c.name, c.description, text});
  }
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> registry = build();
  return registry;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + name + "' (see list-presets)");
}

}  // namespace ddgate
