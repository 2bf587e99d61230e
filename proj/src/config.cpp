#include "ddgate/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ddgate/errors.hpp"

namespace ddgate {

using nlohmann::json;

namespace {

// Field-path aware reader that rejects unknown keys.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError((path_.empty() ? std::string("<root>") : path_) + ": " + msg);
  }
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail("missing required field '" + key + "'");
    return j_.at(key);
  }

  double num(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(at(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(at(key) + ": not finite");
    return d;
  }
  double num(const std::string& key, double def) { return has(key) ? num(key) : (seen_.insert(key), def); }

  int integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(at(key) + ": expected an integer");
    return v.get<int>();
  }
  int integer(const std::string& key, int def) { return has(key) ? integer(key) : def; }

  std::string str(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(at(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::string str(const std::string& key, const std::string& def) { return has(key) ? str(key) : def; }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(at(key) + ": expected true/false");
    return v.get<bool>();
  }

  Obj obj(const std::string& key) { return Obj(raw(key), at(key)); }

  const json& array(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(at(key) + ": expected an array");
    return v;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail("unknown field '" + k + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class E>
E parse_enum(const std::string& value, const std::string& path,
             std::initializer_list<std::pair<const char*, E>> table) {
  std::string options;
  for (const auto& [name, e] : table) {
    if (value == name) return e;
    options += std::string(options.empty() ? "" : ", ") + name;
  }
  throw ConfigError(path + ": '" + value + "' is not one of " + options);
}

template <class E>
std::string enum_name(E e, std::initializer_list<std::pair<const char*, E>> table) {
  for (const auto& [name, v] : table)
    if (v == e) return name;
  return "?";
}

const std::initializer_list<std::pair<const char*, Family>> kFamilies = {{"cpmg", Family::CPMG},
                                                                         {"xyn", Family::XYN}};
const std::initializer_list<std::pair<const char*, InitialState>> kInit = {
    {"polarized", InitialState::Polarized}, {"mixed-target", InitialState::MixedTarget}};
const std::initializer_list<std::pair<const char*, EdgeTiming>> kEdges = {
    {"symmetric", EdgeTiming::Symmetric}, {"uniform", EdgeTiming::Uniform}};
const std::initializer_list<std::pair<const char*, ClosingRule>> kClosing = {
    {"half-pi", ClosingRule::HalfPi}, {"three-halves-odd-blocks", ClosingRule::ThreeHalvesWhenOddBlocks}};
const std::initializer_list<std::pair<const char*, FreeEvolution>> kFree = {
    {"exact", FreeEvolution::Exact}, {"split", FreeEvolution::Split}};
const std::initializer_list<std::pair<const char*, CarrierPhase>> kCarrier = {
    {"coherent", CarrierPhase::Coherent}, {"per-pulse", CarrierPhase::PerPulse}};

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  return v.get<double>();
}

Grid parse_grid(Obj o) {
  Grid g;
  if (o.has("values")) {
    const json& arr = o.array("values");
    for (std::size_t i = 0; i < arr.size(); ++i)
      g.values.push_back(as_number(arr[i], o.at("values") + "[" + std::to_string(i) + "]"));
    if (g.values.empty()) o.fail("'values' is empty");
  } else {
    g.start = o.num("start");
    g.stop = o.num("stop");
    g.step = o.num("step");
    if (!(*g.step > 0)) o.fail("step must be > 0");
    if (*g.stop < *g.start) o.fail("stop must be >= start");
  }
  o.finish();
  return g;
}

IntRange parse_int_range(Obj o) {
  IntRange r{o.integer("min"), o.integer("max"), o.integer("step", 1)};
  if (r.min < 1 || r.max < r.min || r.step < 1) o.fail("need 1 <= min <= max and step >= 1");
  o.finish();
  return r;
}

std::vector<SiteState> parse_sites(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<SiteState> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    SiteState s;
    if (arr[i].is_number_unsigned()) {
      s.levels.push_back(arr[i].get<std::size_t>());
    } else if (arr[i].is_object()) {
      Obj o(arr[i], p);
      const json& mix = o.array("mix");
      for (const auto& v : mix) {
        if (!v.is_number_unsigned()) throw ConfigError(p + ".mix: expected level indices");
        s.levels.push_back(v.get<std::size_t>());
      }
      if (s.levels.empty()) throw ConfigError(p + ".mix: empty");
      o.finish();
    } else {
      throw ConfigError(p + ": expected a level index or {\"mix\": [...]}");
    }
    out.push_back(std::move(s));
  }
  return out;
}

MetricsConfig parse_metrics(Obj o) {
  MetricsConfig m;
  if (o.has("pseudo_fidelity")) {
    Obj p = o.obj("pseudo_fidelity");
    m.pseudo_fidelity = p.str("trace");
    p.finish();
  }
  if (o.has("extremum")) {
    Obj p = o.obj("extremum");
    m.extremum = ExtremumMetric{p.str("trace"), p.str("kind") == "min"};
    if (p.str("kind") != "min" && p.str("kind") != "max") p.fail("kind must be min or max");
    p.finish();
  }
  if (o.has("resonances")) {
    Obj p = o.obj("resonances");
    ResonanceMetric r;
    r.trace = p.str("trace");
    const std::string kind = p.str("kind", "min");
    if (kind != "min" && kind != "max") p.fail("kind must be min or max");
    r.minimum = kind == "min";
    const json& w = p.array("windows");
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::string wp = p.at("windows") + "[" + std::to_string(i) + "]";
      if (!w[i].is_array() || w[i].size() != 2) throw ConfigError(wp + ": expected [lo, hi]");
      const double lo = as_number(w[i][0], wp), hi = as_number(w[i][1], wp);
      if (!(hi > lo)) throw ConfigError(wp + ": hi must exceed lo");
      r.windows.emplace_back(lo, hi);
    }
    if (r.windows.empty()) p.fail("windows is empty");
    if (p.has("baseline_order")) {
      r.baseline_order = p.integer("baseline_order");
      if (*r.baseline_order < 0) p.fail("baseline_order must be >= 0");
    }
    m.resonances = r;
    p.finish();
  }
  if (o.has("state_fidelity")) {
    const json& arr = o.array("state_fidelity");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Obj p(arr[i], o.at("state_fidelity") + "[" + std::to_string(i) + "]");
      FidelityMetric f;
      f.at = p.num("at");
      const json& sites = p.array("sites");
      for (const auto& s : sites) {
        if (!s.is_number_unsigned()) p.fail("sites must be site indices");
        f.sites.push_back(s.get<std::size_t>());
      }
      for (std::size_t k = 1; k < f.sites.size(); ++k)
        if (f.sites[k] <= f.sites[k - 1]) p.fail("sites must be strictly ascending");
      f.ideal = parse_sites(p.raw("ideal"), p.at("ideal"));
      if (f.ideal.size() != f.sites.size() || f.sites.empty())
        p.fail("ideal needs one entry per kept site");
      p.finish();
      m.state_fidelity.push_back(std::move(f));
    }
  }
  if (o.has("concurrence")) {
    Obj p = o.obj("concurrence");
    m.concurrence_at = p.num("at");
    p.finish();
  }
  o.finish();
  return m;
}

SystemConfig parse_system(Obj o) {
  SystemConfig s;
  s.model = o.str("model");
  if (s.model == "generic") {
    s.generic.omega00 = o.num("omega00", 50.0);
    s.generic.require_weak_coupling = o.boolean("require_weak_coupling", true);
    const json& targets = o.array("targets");
    for (std::size_t i = 0; i < targets.size(); ++i) {
      Obj t(targets[i], o.at("targets") + "[" + std::to_string(i) + "]");
      TargetQubit q;
      q.omega0 = t.num("omega0");
      if (t.has("azx") == t.has("tensor")) t.fail("give exactly one of 'azx' or 'tensor'");
      if (t.has("azx")) {
        q.coupling = t.num("azx");
      } else {
        const json& m = t.array("tensor");
        Tensor3 a;
        if (m.size() != 3) t.fail("tensor must be 3x3");
        for (int r = 0; r < 3; ++r) {
          if (!m[r].is_array() || m[r].size() != 3) t.fail("tensor must be 3x3");
          for (int c = 0; c < 3; ++c) a(r, c) = as_number(m[r][c], t.at("tensor"));
        }
        q.coupling = a;
      }
      t.finish();
      s.generic.targets.push_back(q);
    }
    try {
      s.generic.validate();
    } catch (const std::invalid_argument& e) {
      o.fail(e.what());
    }
  } else if (s.model == "nv") {
    NvParams d;
    s.nv.d_zfs = o.num("d_zfs", d.d_zfs);
    s.nv.gamma_e = o.num("gamma_e", d.gamma_e);
    s.nv.gamma_n = o.num("gamma_n", d.gamma_n);
    s.nv.axx = o.num("axx", d.axx);
    s.nv.ayy = o.num("ayy", d.ayy);
    s.nv.azz = o.num("azz", d.azz);
    s.nv.b0 = o.num("b0", d.b0);
    s.theta0_deg = o.num("theta0_deg", 0.0);
    s.nv.theta0 = s.theta0_deg * std::numbers::pi / 180.0;
    try {
      s.nv.validate();
    } catch (const std::invalid_argument& e) {
      o.fail(e.what());
    }
  } else {
    o.fail("model must be 'generic' or 'nv'");
  }
  o.finish();
  return s;
}

PulseConfig parse_pulse(Obj o) {
  PulseConfig p;
  p.t_pi = o.num("t_pi");
  if (!(p.t_pi > 0)) o.fail("t_pi must be > 0");
  if (o.has("omega1")) {
    const json& v = o.raw("omega1");
    if (v.is_string()) {
      if (v.get<std::string>() != "calibrate") o.fail("omega1 must be a number or \"calibrate\"");
    } else {
      p.omega1 = as_number(v, o.at("omega1"));
      if (!(*p.omega1 > 0)) o.fail("omega1 must be > 0");
    }
  }
  if (o.has("carrier")) {
    const json& v = o.raw("carrier");
    if (v.is_string()) {
      if (v.get<std::string>() != "auto") o.fail("carrier must be a number or \"auto\"");
    } else {
      p.carrier = as_number(v, o.at("carrier"));
      if (!(*p.carrier > 0)) o.fail("carrier must be > 0");
    }
  }
  o.finish();
  return p;
}

SimConfig parse_sim(Obj o) {
  SimConfig s;
  s.dt = o.num("dt");
  if (!(s.dt > 0)) o.fail("dt must be > 0");
  s.record_intermediate = o.boolean("record_intermediate", false);
  s.free_evolution = parse_enum(o.str("free_evolution", "exact"), o.at("free_evolution"), kFree);
  s.carrier_phase = parse_enum(o.str("carrier_phase", "coherent"), o.at("carrier_phase"), kCarrier);
  o.finish();
  return s;
}

void check_factor(const Obj& o, double f, const char* what) {
  if (!(f > 0 && f < 2)) o.fail(std::string(what) + " must lie in (0, 2)");
}

SequenceConfig parse_sequence(Obj o) {
  SequenceConfig s;
  s.family = parse_enum(o.str("family"), o.at("family"), kFamilies);
  s.wrapper_phase = o.num("wrapper_phase", s.wrapper_phase);
  s.edges = parse_enum(o.str("edges", "symmetric"), o.at("edges"), kEdges);
  s.closing = parse_enum(o.str("closing", "half-pi"), o.at("closing"), kClosing);
  s.length_factor = o.num("length_factor", 1.0);
  s.freq_factor = o.num("freq_factor", 1.0);
  check_factor(o, s.length_factor, "length_factor");
  check_factor(o, s.freq_factor, "freq_factor");
  o.finish();
  return s;
}

SweepConfig parse_sweep(Obj o) {
  SweepConfig s;
  s.id = o.str("id");
  if (s.id.empty() || s.id.find_first_of("/\\ ") != std::string::npos)
    o.fail("id must be a non-empty name without spaces or slashes");
  if (o.has("family")) s.family = parse_enum(o.str("family"), o.at("family"), kFamilies);
  if (o.has("initial_state"))
    s.initial_state = parse_enum(o.str("initial_state"), o.at("initial_state"), kInit);
  const bool tau_sweep = o.has("tau_range"), n_sweep = o.has("n_range");
  if (tau_sweep == n_sweep) o.fail("exactly one of 'tau_range' and 'n_range' must be set");
  if (tau_sweep) {
    s.tau_range = parse_grid(o.obj("tau_range"));
    s.n = o.integer("n");
    if (*s.n < 1) o.fail("n must be >= 1");
    if (o.has("tau")) o.fail("'tau' is only valid with 'n_range'");
  } else {
    s.n_range = parse_int_range(o.obj("n_range"));
    s.tau = o.num("tau");
    if (!(*s.tau > 0)) o.fail("tau must be > 0");
    if (o.has("n")) o.fail("'n' is only valid with 'tau_range'");
  }
  if (o.has("metrics")) s.metrics = parse_metrics(o.obj("metrics"));
  if (tau_sweep && (s.metrics.pseudo_fidelity))
    o.fail("pseudo_fidelity needs an N sweep");
  o.finish();
  return s;
}

ErrmapConfig parse_errmap(Obj o) {
  ErrmapConfig e;
  e.family = parse_enum(o.str("family"), o.at("family"), kFamilies);
  e.tau = o.num("tau");
  e.n_range = parse_int_range(o.obj("n_range"));
  e.trace = o.str("trace");
  e.length_factors = parse_grid(o.obj("length_factors"));
  e.freq_factors = parse_grid(o.obj("freq_factors"));
  for (double f : e.length_factors.expand()) check_factor(o, f, "length factor");
  for (double f : e.freq_factors.expand()) check_factor(o, f, "frequency factor");
  o.finish();
  return e;
}

TomographyConfig parse_tomography(Obj o) {
  TomographyConfig t;
  t.sweep = o.str("sweep");
  t.at = o.num("at");
  t.noise = o.num("noise", 0.0);
  t.draws = o.integer("draws", 1);
  if (t.noise < 0) o.fail("noise must be >= 0");
  if (t.draws < 1) o.fail("draws must be >= 1");
  if (o.has("ideal")) t.ideal = parse_sites(o.raw("ideal"), o.at("ideal"));
  o.finish();
  return t;
}

ScalingConfig parse_scaling(Obj o) {
  ScalingConfig s;
  const json& c = o.array("couplings");
  for (std::size_t i = 0; i < c.size(); ++i) {
    s.couplings.push_back(as_number(c[i], o.at("couplings")));
    if (!(s.couplings.back() > 0)) o.fail("couplings must be > 0");
  }
  if (s.couplings.size() < 4) o.fail("need at least 4 coupling values");
  s.tau = o.num("tau");
  s.n_max_scale = o.num("n_max_scale", s.n_max_scale);
  s.trace = o.str("trace", s.trace);
  o.finish();
  return s;
}

// --- serialisation -------------------------------------------------------------

json grid_json(const Grid& g) {
  if (!g.values.empty()) return {{"values", g.values}};
  return {{"start", *g.start}, {"stop", *g.stop}, {"step", *g.step}};
}

json range_json(const IntRange& r) { return {{"min", r.min}, {"max", r.max}, {"step", r.step}}; }

json sites_json(const std::vector<SiteState>& sites) {
  json arr = json::array();
  for (const auto& s : sites) {
    if (s.levels.size() == 1)
      arr.push_back(s.levels[0]);
    else
      arr.push_back({{"mix", s.levels}});
  }
  return arr;
}

json metrics_json(const MetricsConfig& m) {
  json j = json::object();
  if (m.pseudo_fidelity) j["pseudo_fidelity"] = {{"trace", *m.pseudo_fidelity}};
  if (m.extremum)
    j["extremum"] = {{"trace", m.extremum->trace}, {"kind", m.extremum->minimum ? "min" : "max"}};
  if (m.resonances) {
    json w = json::array();
    for (const auto& [lo, hi] : m.resonances->windows) w.push_back({lo, hi});
    j["resonances"] = {{"trace", m.resonances->trace},
                       {"kind", m.resonances->minimum ? "min" : "max"},
                       {"windows", w}};
    if (m.resonances->baseline_order) j["resonances"]["baseline_order"] = *m.resonances->baseline_order;
  }
  if (!m.state_fidelity.empty()) {
    json arr = json::array();
    for (const auto& f : m.state_fidelity)
      arr.push_back({{"at", f.at}, {"sites", f.sites}, {"ideal", sites_json(f.ideal)}});
    j["state_fidelity"] = arr;
  }
  if (m.concurrence_at) j["concurrence"] = {{"at", *m.concurrence_at}};
  return j;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["description"] = c.description;
  json sys;
  sys["model"] = c.system.model;
  if (c.system.model == "generic") {
    sys["omega00"] = c.system.generic.omega00;
    sys["require_weak_coupling"] = c.system.generic.require_weak_coupling;
    json targets = json::array();
    for (const auto& t : c.system.generic.targets) {
      json tj{{"omega0", t.omega0}};
      if (const auto* a = std::get_if<double>(&t.coupling)) {
        tj["azx"] = *a;
      } else {
        const auto& m = std::get<Tensor3>(t.coupling);
        tj["tensor"] = {{m(0, 0), m(0, 1), m(0, 2)}, {m(1, 0), m(1, 1), m(1, 2)}, {m(2, 0), m(2, 1), m(2, 2)}};
      }
      targets.push_back(tj);
    }
    sys["targets"] = targets;
  } else {
    const auto& n = c.system.nv;
    sys.update({{"d_zfs", n.d_zfs}, {"gamma_e", n.gamma_e}, {"gamma_n", n.gamma_n}, {"axx", n.axx},
                {"ayy", n.ayy}, {"azz", n.azz}, {"b0", n.b0}, {"theta0_deg", c.system.theta0_deg}});
  }
  j["system"] = sys;
  j["initial_state"] = enum_name(c.initial_state, kInit);
  json pulse{{"t_pi", c.pulse.t_pi}};
  pulse["omega1"] = c.pulse.omega1 ? json(*c.pulse.omega1) : json("calibrate");
  pulse["carrier"] = c.pulse.carrier ? json(*c.pulse.carrier) : json("auto");
  j["pulse"] = pulse;
  j["sim"] = {{"dt", c.sim.dt},
              {"record_intermediate", c.sim.record_intermediate},
              {"free_evolution", enum_name(c.sim.free_evolution, kFree)},
              {"carrier_phase", enum_name(c.sim.carrier_phase, kCarrier)}};
  j["sequence"] = {{"family", enum_name(c.sequence.family, kFamilies)},
                   {"wrapper_phase", c.sequence.wrapper_phase},
                   {"edges", enum_name(c.sequence.edges, kEdges)},
                   {"closing", enum_name(c.sequence.closing, kClosing)},
                   {"length_factor", c.sequence.length_factor},
                   {"freq_factor", c.sequence.freq_factor}};
  json sweeps = json::array();
  for (const auto& s : c.sweeps) {
    json sj{{"id", s.id}};
    if (s.family) sj["family"] = enum_name(*s.family, kFamilies);
    if (s.initial_state) sj["initial_state"] = enum_name(*s.initial_state, kInit);
    if (s.tau_range) {
      sj["tau_range"] = grid_json(*s.tau_range);
      sj["n"] = *s.n;
    } else {
      sj["n_range"] = range_json(*s.n_range);
      sj["tau"] = *s.tau;
    }
    const json m = metrics_json(s.metrics);
    if (!m.empty()) sj["metrics"] = m;
    sweeps.push_back(sj);
  }
  j["sweeps"] = sweeps;
  if (c.errmap) {
    const auto& e = *c.errmap;
    j["errmap"] = {{"family", enum_name(e.family, kFamilies)},
                   {"tau", e.tau},
                   {"n_range", range_json(e.n_range)},
                   {"trace", e.trace},
                   {"length_factors", grid_json(e.length_factors)},
                   {"freq_factors", grid_json(e.freq_factors)}};
  }
  if (!c.tomography.empty()) {
    json arr = json::array();
    for (const auto& t : c.tomography) {
      json tj{{"sweep", t.sweep}, {"at", t.at}, {"noise", t.noise}, {"draws", t.draws}};
      if (!t.ideal.empty()) tj["ideal"] = sites_json(t.ideal);
      arr.push_back(tj);
    }
    j["tomography"] = arr;
  }
  if (c.scaling)
    j["scaling"] = {{"couplings", c.scaling->couplings},
                    {"tau", c.scaling->tau},
                    {"n_max_scale", c.scaling->n_max_scale},
                    {"trace", c.scaling->trace}};
  j["seed"] = c.seed;
  return j;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

std::vector<double> Grid::expand() const {
  if (!values.empty()) return values;
  std::vector<double> out;
  const auto count = static_cast<long long>(std::floor((*stop - *start) / *step + 1e-9));
  for (long long k = 0; k <= count; ++k) out.push_back(*start + static_cast<double>(k) * *step);
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  Obj o(j, "");
  ExperimentConfig c;
  c.name = o.str("name", "");
  c.description = o.str("description", "");
  c.system = parse_system(o.obj("system"));
  c.initial_state = parse_enum(o.str("initial_state", "polarized"), "initial_state", kInit);
  c.pulse = parse_pulse(o.obj("pulse"));
  c.sim = parse_sim(o.obj("sim"));
  c.sequence = parse_sequence(o.obj("sequence"));
  if (o.has("sweeps")) {
    const json& arr = o.array("sweeps");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      c.sweeps.push_back(parse_sweep(Obj(arr[i], "sweeps[" + std::to_string(i) + "]")));
      if (!ids.insert(c.sweeps.back().id).second)
        throw ConfigError("sweeps[" + std::to_string(i) + "].id: duplicate id '" + c.sweeps.back().id + "'");
    }
  }
  if (o.has("errmap")) c.errmap = parse_errmap(o.obj("errmap"));
  if (o.has("tomography")) {
    const json& arr = o.array("tomography");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      c.tomography.push_back(parse_tomography(Obj(arr[i], "tomography[" + std::to_string(i) + "]")));
      const auto& t = c.tomography.back();
      const bool known = std::any_of(c.sweeps.begin(), c.sweeps.end(),
                                     [&](const SweepConfig& s) { return s.id == t.sweep; });
      if (!known)
        throw ConfigError("tomography[" + std::to_string(i) + "].sweep: unknown sweep '" + t.sweep + "'");
    }
  }
  if (o.has("scaling")) {
    c.scaling = parse_scaling(o.obj("scaling"));
    if (c.system.model != "generic" || c.system.generic.targets.size() != 1)
      throw ConfigError("scaling: needs a generic model with exactly one target");
  }
  if (o.has("seed")) {
    const json& s = o.raw("seed");
    if (!s.is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  o.finish();
  if (c.sweeps.empty() && !c.errmap && !c.scaling)
    throw ConfigError("<root>: nothing to run (no sweeps, errmap or scaling)");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
  json j = to_json(cfg);
  j.erase("name");
  j.erase("description");
  return sha256_hex(j.dump());
}

SpinSystem build_system(const ExperimentConfig& cfg, InitialState init) {
  if (cfg.system.model == "generic") return make_generic_system(cfg.system.generic, init);
  return make_nv_system(cfg.system.nv, init);
}

}  // namespace ddgate
