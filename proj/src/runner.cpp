#include "ddgate/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "ddgate/errors.hpp"

namespace ddgate {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string sweep_csv(const SweepResult& r) {
  std::string out = r.axis_name;
  for (const auto& [label, values] : r.traces) out += "," + label;
  out += "\n";
  for (std::size_t i = 0; i < r.axis_values.size(); ++i) {
    out += format_number(r.axis_values[i]);
    for (const auto& [label, values] : r.traces) out += "," + format_number(values[i]);
    out += "\n";
  }
  return out;
}

json RunManifest::to_json() const {
  json files = json::array();
  for (const auto& f : outputs) files.push_back({{"path", f.path}, {"sha256", f.sha256}});
  json j{{"config_hash", config_hash},
         {"version", version},
         {"started_at", started_at},
         {"wall_clock_seconds", wall_clock_seconds},
         {"outputs", files},
         {"metrics", metrics}};
  if (gate)
    j["gate_metrics"] = {{"pseudo_fidelity", gate->pseudo_fidelity},
                         {"t_pi", gate->t_pi},
                         {"n_pi", gate->n_pi},
                         {"state_fidelity", gate->state_fidelity},
                         {"concurrence_at_half", gate->concurrence_at_half}};
  return j;
}

DrivePulse resolve_pi_pulse(const ExperimentConfig& cfg, const SpinSystem& system) {
  DrivePulse p;
  p.duration = cfg.pulse.t_pi;
  p.omegap = cfg.pulse.carrier ? *cfg.pulse.carrier : system.central_transition_frequency();
  p.omega1 = cfg.pulse.omega1 ? *cfg.pulse.omega1
                              : calibrate_rabi(system, p.duration, p.omegap, cfg.sim.dt).omega1;
  return p;
}

SequenceSpec make_sequence_spec(const ExperimentConfig& cfg, const DrivePulse& pi_pulse,
                                std::optional<Family> family) {
  SequenceSpec s;
  s.family = family.value_or(cfg.sequence.family);
  s.pi_pulse = pi_pulse;
  s.wrapper_phase = cfg.sequence.wrapper_phase;
  s.options = {cfg.sequence.edges, cfg.sequence.closing};
  s.length_factor = cfg.sequence.length_factor;
  s.freq_factor = cfg.sequence.freq_factor;
  return s;
}

namespace {

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Calibration is the expensive part of resolving a pulse; share it between
// sweeps of one run.
class PulseCache {
 public:
  explicit PulseCache(const ExperimentConfig& cfg) : cfg_(cfg) {}
  DrivePulse get(const SpinSystem& system) {
    if (!pulse_) pulse_ = resolve_pi_pulse(cfg_, system);
    return *pulse_;
  }

 private:
  const ExperimentConfig& cfg_;
  std::optional<DrivePulse> pulse_;
};

SweepResult execute_sweep(const ExperimentConfig& cfg, const SweepConfig& sweep,
                          PulseCache& pulses, unsigned threads, bool keep_states) {
  const SpinSystem system = build_system(cfg, sweep.initial_state.value_or(cfg.initial_state));
  const SequenceSpec spec = make_sequence_spec(cfg, pulses.get(system), sweep.family);
  if (sweep.tau_range)
    return sweep_tau(system, spec, *sweep.n, sweep.tau_range->expand(), cfg.sim, threads,
                     keep_states);
  const auto& r = *sweep.n_range;
  return sweep_n(system, spec, *sweep.tau, n_range(r.min, r.max, r.step), cfg.sim, keep_states);
}

std::size_t index_at(const SweepResult& r, double at, const std::string& what) {
  for (std::size_t i = 0; i < r.axis_values.size(); ++i)
    if (std::abs(r.axis_values[i] - at) <= 1e-9 * std::max(1.0, std::abs(at))) return i;
  throw ConfigError(what + ": axis value " + format_number(at) + " is not on the sweep grid");
}

DensityMatrix site_state(const std::vector<SiteState>& sites, const std::vector<std::size_t>& dims,
                         const std::string& what) {
  std::vector<Operator> factors;
  for (std::size_t s = 0; s < sites.size(); ++s) {
    const auto d = static_cast<Eigen::Index>(dims[s]);
    Matrix m = Matrix::Zero(d, d);
    for (std::size_t lvl : sites[s].levels) {
      if (lvl >= dims[s]) throw ConfigError(what + ": level " + std::to_string(lvl) + " out of range");
      m(static_cast<Eigen::Index>(lvl), static_cast<Eigen::Index>(lvl)) +=
          1.0 / static_cast<double>(sites[s].levels.size());
    }
    factors.emplace_back(m);
  }
  return DensityMatrix(tensor(factors), "ideal");
}

double observable_range(const SpinSystem& system, const std::string& label) {
  const auto& o = system.observable(label);
  return o.hi - o.lo;
}

/// First N along the axis at which the trace is farthest from its start,
/// searched over the first half period of the fitted oscillation.
int inversion_count(const SweepResult& r, const std::vector<double>& y, double period) {
  const double limit = r.axis_values.front() + 0.75 * period;
  std::size_t best = 0;
  for (std::size_t i = 0; i < y.size() && r.axis_values[i] <= limit; ++i)
    if (std::abs(y[i] - y.front()) > std::abs(y[best] - y.front())) best = i;
  return static_cast<int>(std::lround(r.axis_values[best]));
}

json sweep_metrics(const ExperimentConfig& cfg, const SweepConfig& sweep, const SweepResult& r,
                   std::optional<GateMetrics>& gate) {
  json m = json::object();
  const MetricsConfig& mc = sweep.metrics;
  const SpinSystem system = build_system(cfg, sweep.initial_state.value_or(cfg.initial_state));
  const std::string where = "sweeps." + sweep.id + ".metrics";

  if (mc.pseudo_fidelity) {
    const auto& y = r.trace(*mc.pseudo_fidelity);
    try {
      const CosineFit f = pseudo_fidelity(r.axis_values, y, observable_range(system, *mc.pseudo_fidelity));
      const int n_pi = inversion_count(r, y, f.period);
      m["pseudo_fidelity"] = {{"trace", *mc.pseudo_fidelity},
                              {"amplitude", f.amplitude},
                              {"period", f.period},
                              {"rms_residual", f.rms_residual},
                              {"n_pi", n_pi},
                              {"t_pi", n_pi * *sweep.tau},
                              {"t_pi_fit", 0.5 * f.period * *sweep.tau}};
      if (!gate) {
        gate = GateMetrics{};
        gate->pseudo_fidelity = std::clamp(f.amplitude, 0.0, 1.0);
        gate->n_pi = n_pi;
        gate->t_pi = n_pi * *sweep.tau;
      }
    } catch (const NumericError& e) {
      m["pseudo_fidelity"] = {{"trace", *mc.pseudo_fidelity}, {"error", e.what()}};
    }
  }
  if (mc.extremum) {
    const auto& y = r.trace(mc.extremum->trace);
    const auto it = mc.extremum->minimum ? std::min_element(y.begin(), y.end())
                                         : std::max_element(y.begin(), y.end());
    const auto i = static_cast<std::size_t>(it - y.begin());
    m["extremum"] = {{"trace", mc.extremum->trace},
                     {"kind", mc.extremum->minimum ? "min" : "max"},
                     {"position", r.axis_values[i]},
                     {"value", *it}};
  }
  if (mc.resonances) {
    const auto& rc = *mc.resonances;
    std::vector<double> y = r.trace(rc.trace);
    if (rc.baseline_order) y = baseline_correct(r.axis_values, y, *rc.baseline_order).residual;
    json found = json::array();
    for (const auto& [lo, hi] : rc.windows) {
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i < y.size(); ++i)
        if (r.axis_values[i] >= lo && r.axis_values[i] <= hi) {
          xs.push_back(r.axis_values[i]);
          ys.push_back(y[i]);
        }
      json w{{"window", {lo, hi}}};
      try {
        const Resonance res = find_resonance(xs, ys, rc.minimum);
        w["position"] = res.position;
        w["value"] = res.value;
      } catch (const std::exception& e) {
        w["error"] = e.what();
      }
      found.push_back(w);
    }
    m["resonances"] = {{"trace", rc.trace}, {"baseline_order", rc.baseline_order ? json(*rc.baseline_order) : json(nullptr)}, {"found", found}};
  }
  if (!mc.state_fidelity.empty()) {
    json arr = json::array();
    for (const auto& f : mc.state_fidelity) {
      const std::size_t i = index_at(r, f.at, where + ".state_fidelity");
      const DensityMatrix& full = r.states.at(i);
      for (std::size_t s : f.sites)
        if (s >= full.dims().size()) throw ConfigError(where + ".state_fidelity: site out of range");
      const DensityMatrix reduced = f.sites.size() == full.dims().size() ? full : partial_trace(full, f.sites);
      const DensityMatrix ideal = site_state(f.ideal, reduced.dims(), where + ".state_fidelity");
      const double sq = state_fidelity(reduced, ideal);
      arr.push_back({{"at", f.at}, {"sites", f.sites}, {"fidelity", sq}, {"root_fidelity", root_fidelity(reduced, ideal)}});
      if (gate && gate->state_fidelity == 0) gate->state_fidelity = sq;
    }
    m["state_fidelity"] = arr;
  }
  if (mc.concurrence_at) {
    const std::size_t i = index_at(r, *mc.concurrence_at, where + ".concurrence");
    const DensityMatrix& st = r.states.at(i);
    if (st.dims() != std::vector<std::size_t>{2, 2})
      throw ConfigError(where + ".concurrence: needs a two-qubit system");
    const double c = concurrence(st);
    m["concurrence"] = {{"at", *mc.concurrence_at}, {"value", c}};
    if (gate && gate->concurrence_at_half == 0) gate->concurrence_at_half = c;
  }
  return m;
}

json tomography_metrics(const ExperimentConfig& cfg, const TomographyConfig& t, const SweepResult& r,
                        std::string& csv) {
  const std::size_t i = index_at(r, t.at, "tomography." + t.sweep);
  const DensityMatrix& truth = r.states.at(i);
  for (auto d : truth.dims())
    if (d != 2) throw ConfigError("tomography: only qubit registers can be reconstructed");
  const std::size_t nq = truth.dims().size();
  const std::vector<double> exact = measure_paulis(truth);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> noise(-t.noise, t.noise);

  double f_sum = 0, f_min = 1;
  std::optional<DensityMatrix> first;
  for (int d = 0; d < t.draws; ++d) {
    std::vector<double> e = exact;
    if (t.noise > 0)
      for (auto& v : e) v += noise(rng);
    const DensityMatrix rec = tomography(e, nq);
    const double f = state_fidelity(rec, truth);
    f_sum += f;
    f_min = std::min(f_min, f);
    if (!first) first = rec;
  }
  json m{{"sweep", t.sweep}, {"at", t.at}, {"noise", t.noise}, {"draws", t.draws},
         {"fidelity_to_simulated_mean", f_sum / t.draws}, {"fidelity_to_simulated_min", f_min}};
  if (nq == 2) {
    m["concurrence_simulated"] = concurrence(truth);
    m["concurrence_reconstructed"] = concurrence(*first);
  }
  if (!t.ideal.empty()) {
    if (t.ideal.size() != nq) throw ConfigError("tomography.ideal: need one entry per qubit");
    const DensityMatrix ideal = site_state(t.ideal, truth.dims(), "tomography.ideal");
    m["fidelity_simulated_to_ideal"] = state_fidelity(truth, ideal);
    m["fidelity_reconstructed_to_ideal"] = state_fidelity(*first, ideal);
  }
  csv = "row,col,re,im\n";
  const Matrix& rho = first->matrix();
  for (Eigen::Index a = 0; a < rho.rows(); ++a)
    for (Eigen::Index b = 0; b < rho.cols(); ++b)
      csv += std::to_string(a) + "," + std::to_string(b) + "," + format_number(rho(a, b).real()) + "," +
             format_number(rho(a, b).imag()) + "\n";
  return m;
}

class OutputWriter {
 public:
  OutputWriter(const std::string& dir, std::string prefix) : dir_(dir), prefix_(std::move(prefix)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  }
  void write(const std::string& suffix, const std::string& content, RunManifest& manifest) {
    const fs::path p = fs::path(dir_) / (prefix_ + "_" + suffix);
    std::ofstream out(p, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("failed writing " + p.string());
    manifest.outputs.push_back({p.string(), sha256_hex(content)});
  }
  void finish(RunManifest& manifest) {
    const fs::path p = fs::path(dir_) / (prefix_ + "_manifest.json");
    std::ofstream out(p, std::ios::binary);
    out << manifest.to_json().dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing " + p.string());
  }

 private:
  std::string dir_;
  std::string prefix_;
};

std::string prefix_of(const ExperimentConfig& cfg) { return cfg.name.empty() ? "run" : cfg.name; }

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < count; i += workers) body(i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string errmap_csv(const ErrmapResult& e) {
  std::string out = "length_factor";
  for (double f : e.freq_factors) out += "," + format_number(f);
  out += "\n";
  for (std::size_t i = 0; i < e.length_factors.size(); ++i) {
    out += format_number(e.length_factors[i]);
    for (const auto& c : e.cells[i]) out += "," + (c ? format_number(*c) : std::string("NA"));
    out += "\n";
  }
  return out;
}

json errmap_metrics(const ErrmapResult& e) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t bi = 0, bj = 0, missing = 0;
  for (std::size_t i = 0; i < e.cells.size(); ++i)
    for (std::size_t j = 0; j < e.cells[i].size(); ++j) {
      if (!e.cells[i][j]) {
        ++missing;
        continue;
      }
      lo = std::min(lo, *e.cells[i][j]);
      if (*e.cells[i][j] > hi) {
        hi = *e.cells[i][j];
        bi = i;
        bj = j;
      }
    }
  json m{{"missing_cells", missing}};
  if (std::isfinite(hi))
    m.update({{"min", lo}, {"max", hi}, {"argmax_length_factor", e.length_factors[bi]},
              {"argmax_freq_factor", e.freq_factors[bj]}});
  return m;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg, const SweepConfig& sweep, unsigned threads,
                      bool keep_states) {
  PulseCache pulses(cfg);
  return execute_sweep(cfg, sweep, pulses, threads, keep_states);
}

ErrmapResult compute_errmap(const ExperimentConfig& cfg, unsigned threads) {
  if (!cfg.errmap) throw ConfigError("config has no errmap block");
  const ErrmapConfig& e = *cfg.errmap;
  const SpinSystem system = build_system(cfg, cfg.initial_state);
  const DrivePulse pulse = resolve_pi_pulse(cfg, system);
  const double range = observable_range(system, e.trace);
  const auto ns = n_range(e.n_range.min, e.n_range.max, e.n_range.step);

  ErrmapResult out;
  out.length_factors = e.length_factors.expand();
  out.freq_factors = e.freq_factors.expand();
  const std::size_t cols = out.freq_factors.size();
  out.cells.assign(out.length_factors.size(), std::vector<std::optional<double>>(cols));
  parallel_for(out.length_factors.size() * cols, threads, [&](std::size_t k) {
    SequenceSpec spec = make_sequence_spec(cfg, pulse, e.family);
    spec.length_factor = out.length_factors[k / cols];
    spec.freq_factor = out.freq_factors[k % cols];
    const SweepResult r = sweep_n(system, spec, e.tau, ns, cfg.sim);
    try {
      out.cells[k / cols][k % cols] =
          pseudo_fidelity(r.axis_values, r.trace(e.trace), range).amplitude;
    } catch (const NumericError&) {
      // cell stays missing
    }
  });
  return out;
}

std::vector<ScalingPoint> compute_scaling(const ExperimentConfig& cfg) {
  if (!cfg.scaling) throw ConfigError("config has no scaling block");
  const ScalingConfig& sc = *cfg.scaling;
  std::vector<ScalingPoint> out;
  for (double a : sc.couplings) {
    ExperimentConfig c = cfg;
    c.system.generic.targets[0].coupling = a;
    const SpinSystem system = build_system(c, c.initial_state);
    const SequenceSpec spec = make_sequence_spec(c, resolve_pi_pulse(c, system));
    ScalingPoint p;
    p.coupling = a;
    p.n_max = static_cast<int>(std::ceil(sc.n_max_scale / a));
    const SweepResult r = sweep_n(system, spec, sc.tau, n_range(1, p.n_max), c.sim);
    const CosineFit f = pseudo_fidelity(r.axis_values, r.trace(sc.trace), observable_range(system, sc.trace));
    p.period = f.period;
    p.t_pi = 0.5 * f.period * sc.tau;
    p.pseudo_fidelity = f.amplitude;
    out.push_back(p);
  }
  return out;
}

RunManifest run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.config_hash = config_hash(cfg);
  manifest.started_at = utc_now();
  OutputWriter writer(opts.out_dir, prefix_of(cfg));
  PulseCache pulses(cfg);

  std::map<std::string, SweepResult> results;
  json sweeps = json::object();
  for (const auto& s : cfg.sweeps) {
    const bool tomo = std::any_of(cfg.tomography.begin(), cfg.tomography.end(),
                                  [&](const TomographyConfig& t) { return t.sweep == s.id; });
    SweepResult r = execute_sweep(cfg, s, pulses, opts.threads, s.metrics.needs_states() || tomo);
    r.provenance = {manifest.config_hash, manifest.started_at};
    writer.write(s.id + ".csv", sweep_csv(r), manifest);
    sweeps[s.id] = sweep_metrics(cfg, s, r, manifest.gate);
    results.emplace(s.id, std::move(r));
  }
  if (!sweeps.empty()) manifest.metrics["sweeps"] = sweeps;

  if (!cfg.tomography.empty()) {
    json arr = json::array();
    for (std::size_t k = 0; k < cfg.tomography.size(); ++k) {
      std::string csv;
      arr.push_back(tomography_metrics(cfg, cfg.tomography[k], results.at(cfg.tomography[k].sweep), csv));
      writer.write("tomography" + std::to_string(k) + ".csv", csv, manifest);
    }
    manifest.metrics["tomography"] = arr;
  }

  if (cfg.scaling) {
    const auto points = compute_scaling(cfg);
    std::string csv = "coupling,n_max,period,t_pi,pseudo_fidelity\n";
    std::vector<std::pair<double, double>> fits;
    for (const auto& p : points) {
      csv += format_number(p.coupling) + "," + std::to_string(p.n_max) + "," + format_number(p.period) +
             "," + format_number(p.t_pi) + "," + format_number(p.pseudo_fidelity) + "\n";
      fits.emplace_back(p.coupling, p.t_pi);
    }
    writer.write("scaling.csv", csv, manifest);
    json m = json::object();
    try {
      const ScalingFit s = tpi_scaling(fits);
      m = {{"c", s.c}, {"relative_residuals", s.relative_residuals}};
    } catch (const NumericError& e) {
      m = {{"error", e.what()}};
    }
    manifest.metrics["scaling"] = m;
  }

  if (cfg.errmap) {
    const ErrmapResult e = compute_errmap(cfg, opts.threads);
    writer.write("errmap.csv", errmap_csv(e), manifest);
    manifest.metrics["errmap"] = errmap_metrics(e);
  }

  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  writer.finish(manifest);
  return manifest;
}

RunManifest run_errmap(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (!cfg.errmap) throw ConfigError("config has no errmap block");
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.config_hash = config_hash(cfg);
  manifest.started_at = utc_now();
  OutputWriter writer(opts.out_dir, prefix_of(cfg));
  const ErrmapResult e = compute_errmap(cfg, opts.threads);
  writer.write("errmap.csv", errmap_csv(e), manifest);
  manifest.metrics["errmap"] = errmap_metrics(e);
  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  writer.finish(manifest);
  return manifest;
}

}  // namespace ddgate
