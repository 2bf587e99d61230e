#include "ddgate/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "ddgate/errors.hpp"

namespace ddgate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMinStepsPerPi = 20;
constexpr int kMinStepsPerCarrier = 10;

Matrix step_exponential(Eigen::SelfAdjointEigenSolver<Matrix>& es, const Matrix& h, double step) {
  es.compute(h);
  const auto& vals = es.eigenvalues();
  Eigen::VectorXcd phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) phases(k) = std::polar(1.0, -kTwoPi * step * vals(k));
  const Matrix& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("SimConfig: dt must be > 0");
}

void SimConfig::validate_for(const PulseSequence& seq) const {
  validate();
  const double t_pi = seq.shortest_pi_duration();
  if (dt > t_pi / kMinStepsPerPi * (1 + 1e-9))
    throw std::invalid_argument("SimConfig: dt " + std::to_string(dt) +
                                " gives fewer than 20 steps per pi pulse of " +
                                std::to_string(t_pi));
  for (const auto& e : seq.elements)
    if (const auto* p = std::get_if<PulseElement>(&e);
        p && dt * p->pulse.omegap > 1.0 / kMinStepsPerCarrier * (1 + 1e-9))
      throw std::invalid_argument("SimConfig: dt " + std::to_string(dt) +
                                  " under-resolves the carrier at " +
                                  std::to_string(p->pulse.omegap));
}

Operator pulse_propagator(const Operator& h0, const DrivePulse& pulse, const Operator& drive_op,
                          double t_start, double dt) {
  pulse.validate();
  if (!(dt > 0)) throw std::invalid_argument("pulse_propagator: dt must be > 0");
  if (drive_op.dims() != h0.dims())
    throw std::invalid_argument("pulse_propagator: drive operator dims differ from H0");
  const auto n = static_cast<long long>(std::llround(pulse.duration / dt));
  if (pulse.duration == 0) return Operator::identity(h0.dims());
  if (n < 1)
    throw std::invalid_argument("pulse_propagator: duration " + std::to_string(pulse.duration) +
                                " shorter than half a step " + std::to_string(dt));
  const double h = pulse.duration / static_cast<double>(n);

  const Matrix& a = h0.matrix();
  const Matrix& x = drive_op.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.rows());
  Matrix u = Matrix::Identity(a.rows(), a.cols());
  Matrix hk(a.rows(), a.cols());
  for (long long k = 0; k < n; ++k) {
    const double t = t_start + (static_cast<double>(k) + 0.5) * h;
    hk.noalias() = a + (pulse.omega1 * std::cos(kTwoPi * pulse.omegap * t + pulse.phase)) * x;
    u = step_exponential(es, hk, h) * u;
  }
  return Operator(std::move(u), h0.dims());
}

// --- Propagator -------------------------------------------------------------

Propagator::Propagator(const SpinSystem& system, const SimConfig& cfg)
    : system_(system), cfg_(cfg), h0_eig_(eig_hermitian(system.h0)) {
  cfg_.validate();
  if (cfg_.free_evolution == FreeEvolution::Split) {
    if (system.h0_terms.empty()) throw std::invalid_argument("Propagator: system has no H0 terms");
    for (const auto& t : system.h0_terms) term_eigs_.push_back(eig_hermitian(t));
  }
}

double Propagator::pulse_time(double t_start) const {
  return cfg_.carrier_phase == CarrierPhase::Coherent ? t_start : 0.0;
}

Operator Propagator::delay(double duration) const {
  if (duration < 0) throw std::invalid_argument("negative delay " + std::to_string(duration));
  if (cfg_.free_evolution == FreeEvolution::Exact) return herm_propagator(h0_eig_, duration);
  Matrix u = Matrix::Identity(static_cast<Eigen::Index>(system_.h0.side()),
                              static_cast<Eigen::Index>(system_.h0.side()));
  for (const auto& e : term_eigs_) u = herm_propagator(e, duration).matrix() * u;
  return Operator(std::move(u), system_.h0.dims());
}

Operator Propagator::element(const SequenceElement& e, double t_start) const {
  if (const auto* d = std::get_if<Delay>(&e)) return delay(d->duration);
  DrivePulse lab = std::get<PulseElement>(e).pulse;
  lab.phase *= system_.phase_sign;
  return pulse_propagator(system_.h0, lab, system_.drive, pulse_time(t_start), cfg_.dt);
}

Operator Propagator::sequence(const PulseSequence& seq) {
  const auto& els = seq.elements;
  std::size_t shared = 0;
  while (shared < els.size() && shared < cached_elements_.size() &&
         els[shared] == cached_elements_[shared])
    ++shared;
  cached_elements_.resize(shared);
  cached_cumulative_.resize(shared);

  double t = 0;
  for (std::size_t i = 0; i < shared; ++i) t += element_duration(els[i]);
  const auto side = static_cast<Eigen::Index>(system_.h0.side());
  for (std::size_t i = shared; i < els.size(); ++i) {
    try {
      Matrix step = element(els[i], t).matrix();
      cached_cumulative_.push_back(i == 0 ? step : (step * cached_cumulative_.back()).eval());
    } catch (const std::invalid_argument& ex) {
      throw std::invalid_argument("sequence element " + std::to_string(i) + ": " + ex.what());
    }
    cached_elements_.push_back(els[i]);
    t += element_duration(els[i]);
  }
  if (cached_cumulative_.empty()) return Operator(Matrix::Identity(side, side), system_.h0.dims());
  return Operator(cached_cumulative_.back(), system_.h0.dims());
}

SequenceRun Propagator::run(const PulseSequence& seq) {
  cfg_.validate_for(seq);
  SequenceRun out;
  if (!cfg_.record_intermediate) {
    out.propagator = sequence(seq);
    out.final_state = evolve(system_.initial, out.propagator);
    return out;
  }
  // Intermediate states need every element separately; reuse the prefix
  // cache for the propagators and evolve the state alongside.
  out.propagator = sequence(seq);
  out.intermediate.reserve(seq.elements.size());
  for (const auto& u : cached_cumulative_)
    out.intermediate.push_back(evolve(system_.initial, Operator(u, system_.h0.dims())));
  out.final_state = out.intermediate.empty() ? system_.initial : out.intermediate.back();
  return out;
}

SequenceRun apply_sequence(const SpinSystem& system, const PulseSequence& seq,
                           const SimConfig& cfg) {
  if (system.h0.dims() != system.initial.dims())
    throw std::invalid_argument("apply_sequence: initial state dims differ from H0");
  Propagator p(system, cfg);
  return p.run(seq);
}

// --- sweeps -----------------------------------------------------------------

PulseSequence SequenceSpec::compile(int n, double tau) const {
  return compile_sequence(family, n, tau, pi_pulse, wrapper_phase, options, length_factor,
                          freq_factor);
}

std::vector<double> evaluate_observables(const SpinSystem& system, const DensityMatrix& rho) {
  std::vector<double> out;
  out.reserve(system.observables.size());
  for (const auto& o : system.observables) out.push_back(expval(rho, o.op));
  return out;
}

namespace {

SweepResult make_result(const SpinSystem& system, std::string axis, std::vector<double> values,
                        const std::vector<std::vector<double>>& rows) {
  SweepResult r;
  r.axis_name = std::move(axis);
  r.axis_values = std::move(values);
  for (std::size_t k = 0; k < system.observables.size(); ++k) {
    std::vector<double> col;
    col.reserve(rows.size());
    for (const auto& row : rows) col.push_back(row[k]);
    r.add_trace(system.observables[k].label, std::move(col));
  }
  return r;
}

}  // namespace

SweepResult sweep_tau(const SpinSystem& system, const SequenceSpec& spec, int n,
                      const std::vector<double>& tau_grid, const SimConfig& cfg, unsigned threads,
                      bool keep_states) {
  if (tau_grid.empty()) throw std::invalid_argument("sweep_tau: empty grid");
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    if (!(tau_grid[i] > tau_grid[i - 1]))
      throw std::invalid_argument("sweep_tau: grid must be strictly increasing");
  // Compile everything up front so precondition errors surface on this thread.
  std::vector<PulseSequence> seqs;
  seqs.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    seqs.push_back(spec.compile(n, tau));
    cfg.validate_for(seqs.back());
  }

  std::vector<std::vector<double>> rows(tau_grid.size());
  std::vector<std::optional<DensityMatrix>> states(tau_grid.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tau_grid.size())));
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](unsigned w) {
    try {
      Propagator p(system, cfg);
      for (std::size_t i = w; i < seqs.size(); i += workers) {
        const auto run = p.run(seqs[i]);
        rows[i] = evaluate_observables(system, run.final_state);
        if (keep_states) states[i] = run.final_state;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  SweepResult r = make_result(system, "tau", tau_grid, rows);
  if (keep_states)
    for (auto& s : states) r.states.push_back(std::move(*s));
  return r;
}

std::vector<int> n_range(int n_min, int n_max, int step) {
  if (n_min < 1 || n_max < n_min || step < 1)
    throw std::invalid_argument("n_range: need 1 <= n_min <= n_max and step >= 1");
  std::vector<int> out;
  for (int n = n_min; n <= n_max; n += step) out.push_back(n);
  return out;
}

SweepResult sweep_n(const SpinSystem& system, const SequenceSpec& spec, double tau,
                    const std::vector<int>& n_values, const SimConfig& cfg, bool keep_states) {
  if (n_values.empty()) throw std::invalid_argument("sweep_n: no pulse counts");
  for (std::size_t i = 0; i < n_values.size(); ++i)
    if (n_values[i] < 1 || (i && n_values[i] <= n_values[i - 1]))
      throw std::invalid_argument("sweep_n: pulse counts must be >= 1 and increasing");
  Propagator p(system, cfg);
  std::vector<std::vector<double>> rows;
  std::vector<double> axis;
  SweepResult r;
  for (int n : n_values) {
    const auto run = p.run(spec.compile(n, tau));
    rows.push_back(evaluate_observables(system, run.final_state));
    axis.push_back(n);
    if (keep_states) r.states.push_back(run.final_state);
  }
  SweepResult out = make_result(system, "N", std::move(axis), rows);
  out.states = std::move(r.states);
  return out;
}

}  // namespace ddgate
