#include "ddgate/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ddgate/errors.hpp"

namespace ddgate {

namespace {

std::vector<std::size_t> generic_dims(const GenericSystemParams& p) {
  return std::vector<std::size_t>(1 + p.targets.size(), 2);
}

Operator coupling_term(const Operator* s[3], const Operator* i[3], const Tensor3& a,
                       const std::vector<std::size_t>& dims) {
  Operator acc = Operator::zero(dims);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (a(r, c) != 0.0) acc = acc + (*s[r] * *i[c]) * a(r, c);
  return acc;
}

}  // namespace

void GenericSystemParams::validate() const {
  if (!(omega00 > 0)) throw std::invalid_argument("generic model: omega00 must be > 0");
  if (targets.empty()) throw std::invalid_argument("generic model: at least one target required");
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const auto& t = targets[j];
    if (!(t.omega0 > 0))
      throw std::invalid_argument("generic model: target " + std::to_string(j + 1) +
                                  " omega0 must be > 0");
    if (const double* azx = std::get_if<double>(&t.coupling)) {
      if (require_weak_coupling && std::abs(*azx) > t.omega0)
        throw std::invalid_argument("generic model: target " + std::to_string(j + 1) +
                                    " has azx > omega0 (coupling must not dominate)");
    }
  }
}

void DrivePulse::validate() const {
  if (!(omega1 > 0)) throw std::invalid_argument("DrivePulse: omega1 must be > 0");
  if (!(omegap > 0)) throw std::invalid_argument("DrivePulse: carrier must be > 0");
  if (!(duration > 0)) throw std::invalid_argument("DrivePulse: duration must be > 0");
}

void NvParams::validate() const {
  if (!(d_zfs > 0)) throw std::invalid_argument("NV: zero-field splitting must be > 0");
  if (!(b0 >= 0)) throw std::invalid_argument("NV: field magnitude must be >= 0");
  const double ez = std::abs(gamma_e * b0);
  if (ez >= d_zfs)
    throw std::invalid_argument("NV: electron Zeeman |gamma_e B0| exceeds the zero-field splitting");
  if (std::abs(gamma_e * b0 * std::sin(theta0)) >= 0.1 * d_zfs)
    throw std::invalid_argument(
        "NV: transverse Zeeman |gamma_e B0 sin(theta0)| too large, electron basis hybridises");
}

std::vector<Operator> generic_h0_terms(const GenericSystemParams& params) {
  params.validate();
  const auto dims = generic_dims(params);
  const SpinOperators s2 = spin_ops(2);
  const Operator sx = embed(s2.sx, 0, dims), sy = embed(s2.sy, 0, dims), sz = embed(s2.sz, 0, dims);

  std::vector<Operator> terms;
  terms.push_back(sz * params.omega00);
  for (std::size_t j = 0; j < params.targets.size(); ++j) {
    const auto& t = params.targets[j];
    const Operator ix = embed(s2.sx, j + 1, dims), iy = embed(s2.sy, j + 1, dims),
                   iz = embed(s2.sz, j + 1, dims);
    terms.push_back(iz * t.omega0);
    if (const double* azx = std::get_if<double>(&t.coupling)) {
      terms.push_back((sz * ix) * *azx);
    } else {
      const Operator* s[3] = {&sx, &sy, &sz};
      const Operator* i[3] = {&ix, &iy, &iz};
      terms.push_back(coupling_term(s, i, std::get<Tensor3>(t.coupling), dims));
    }
  }
  return terms;
}

Operator generic_h0(const GenericSystemParams& params) {
  const auto terms = generic_h0_terms(params);
  Operator h = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) h = h + terms[k];
  return h;
}

Operator drive_h1(double t, const DrivePulse& pulse, const Operator& drive_op) {
  const double c = pulse.omega1 * std::cos(2.0 * std::numbers::pi * pulse.omegap * t + pulse.phase);
  return drive_op * c;
}

std::vector<Operator> nv_h0_terms(const NvParams& p) {
  p.validate();
  const std::vector<std::size_t> dims{3, 2};
  const SpinOperators s1 = spin_ops(3), s2 = spin_ops(2);
  const Operator sx = embed(s1.sx, 0, dims), sy = embed(s1.sy, 0, dims), sz = embed(s1.sz, 0, dims);
  const Operator ix = embed(s2.sx, 1, dims), iy = embed(s2.sy, 1, dims), iz = embed(s2.sz, 1, dims);
  const double c = std::cos(p.theta0), s = std::sin(p.theta0);
  return {
      (sz * sz) * p.d_zfs,
      (sz * c + sx * s) * (-p.gamma_e * p.b0),
      (iz * c + ix * s) * (-p.gamma_n * p.b0),
      (sx * ix) * p.axx + (sy * iy) * p.ayy + (sz * iz) * p.azz,
  };
}

Operator nv_h0(const NvParams& p) {
  const auto terms = nv_h0_terms(p);
  Operator h = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) h = h + terms[k];
  return h;
}

Tensor3 nv_rotated_tensor(const NvParams& p) {
  const double c = std::cos(p.theta0), s = std::sin(p.theta0);
  Tensor3 a = Tensor3::Zero();
  a(0, 0) = p.axx * c * c + p.azz * s * s;
  a(2, 2) = p.axx * s * s + p.azz * c * c;
  a(0, 2) = a(2, 0) = (p.axx - p.azz) * s * c;
  a(1, 1) = p.ayy;
  return a;
}

Operator nv_h0_field_frame(const NvParams& p) {
  p.validate();
  const std::vector<std::size_t> dims{3, 2};
  const SpinOperators s1 = spin_ops(3), s2 = spin_ops(2);
  const Operator sx = embed(s1.sx, 0, dims), sy = embed(s1.sy, 0, dims), sz = embed(s1.sz, 0, dims);
  const Operator ix = embed(s2.sx, 1, dims), iy = embed(s2.sy, 1, dims), iz = embed(s2.sz, 1, dims);
  const double c = std::cos(p.theta0), s = std::sin(p.theta0);
  // NV axis seen from the field frame: (−sinθ, 0, cosθ).
  const Operator s_axis = sz * c - sx * s;
  const Operator* sv[3] = {&sx, &sy, &sz};
  const Operator* iv[3] = {&ix, &iy, &iz};
  return (s_axis * s_axis) * p.d_zfs + sz * (-p.gamma_e * p.b0) + iz * (-p.gamma_n * p.b0) +
         coupling_term(sv, iv, nv_rotated_tensor(p), dims);
}

double transition_frequency(const Operator& h0, std::size_t from_index, std::size_t to_index) {
  if (from_index >= h0.side() || to_index >= h0.side())
    throw std::invalid_argument("transition_frequency: basis index out of range");
  const EigenDecomposition eig = eig_hermitian(h0);
  const Matrix& v = eig.vectors.matrix();
  auto assign = [&](std::size_t basis) {
    const auto row = static_cast<Eigen::Index>(basis);
    Eigen::Index best = 0;
    double best_ov = -1, second = -1;
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
      const double ov = std::norm(v(row, k));
      if (ov > best_ov) {
        second = best_ov;
        best_ov = ov;
        best = k;
      } else if (ov > second) {
        second = ov;
      }
    }
    if (best_ov - second < 0.1)
      throw NumericError("transition_frequency: ambiguous eigenstate assignment for basis state " +
                         std::to_string(basis));
    return eig.values(best);
  };
  return std::abs(assign(to_index) - assign(from_index));
}

// --- SpinSystem ------------------------------------------------------------

const Observable& SpinSystem::observable(const std::string& label) const {
  for (const auto& o : observables)
    if (o.label == label) return o;
  throw std::invalid_argument("unknown observable '" + label + "' for " + model + " model");
}

std::size_t SpinSystem::basis_index(std::size_t central, std::size_t target_level) const {
  std::size_t idx = central;
  for (std::size_t s = 1; s < dims.size(); ++s) idx = idx * dims[s] + target_level;
  return idx;
}

double SpinSystem::central_transition_frequency() const {
  const std::size_t n_targets = dims_product(dims) / dims[0];
  double sum = 0;
  for (std::size_t cfg = 0; cfg < n_targets; ++cfg) {
    const std::size_t from = level0 * n_targets + cfg;
    const std::size_t to = level1 * n_targets + cfg;
    sum += transition_frequency(h0, from, to);
  }
  return sum / static_cast<double>(n_targets);
}

namespace {

double level_energy_sign(const SpinSystem& sys) {
  // Diagonal energies are enough to order the two computational levels.
  const std::size_t i0 = sys.basis_index(sys.level0), i1 = sys.basis_index(sys.level1);
  const double e0 = sys.h0(i0, i0).real(), e1 = sys.h0(i1, i1).real();
  return e0 > e1 ? 1.0 : -1.0;
}

DensityMatrix central_with_targets(const std::vector<std::size_t>& dims, std::size_t central_level,
                                   InitialState init) {
  Matrix c = Matrix::Zero(static_cast<Eigen::Index>(dims[0]), static_cast<Eigen::Index>(dims[0]));
  c(static_cast<Eigen::Index>(central_level), static_cast<Eigen::Index>(central_level)) = 1.0;
  std::vector<Operator> factors{Operator(c)};
  for (std::size_t s = 1; s < dims.size(); ++s) {
    const auto n = static_cast<Eigen::Index>(dims[s]);
    Matrix t = Matrix::Zero(n, n);
    if (init == InitialState::Polarized)
      t(0, 0) = 1.0;
    else
      t = Matrix::Identity(n, n) / static_cast<double>(n);
    factors.emplace_back(t);
  }
  return DensityMatrix(tensor(factors),
                       init == InitialState::Polarized ? "polarized" : "mixed-target");
}

}  // namespace

SpinSystem make_generic_system(const GenericSystemParams& params, InitialState init) {
  SpinSystem sys;
  sys.model = "generic";
  sys.time_unit = "time";
  sys.freq_unit = "1/time";
  sys.dims = generic_dims(params);
  sys.h0_terms = generic_h0_terms(params);
  sys.h0 = generic_h0(params);
  const SpinOperators s2 = spin_ops(2);
  sys.drive = embed(s2.sx, 0, sys.dims) * 2.0;
  sys.level0 = 0;
  sys.level1 = 1;
  sys.initial = central_with_targets(sys.dims, 0, init);
  sys.fluorescence_ref = central_with_targets(sys.dims, 0, InitialState::MixedTarget);
  sys.observables.push_back({"Sz", embed(s2.sz, 0, sys.dims), -0.5, 0.5});
  sys.observables.push_back({"Sx", embed(s2.sx, 0, sys.dims), -0.5, 0.5});
  sys.observables.push_back({"Sy", embed(s2.sy, 0, sys.dims), -0.5, 0.5});
  for (std::size_t j = 0; j < params.targets.size(); ++j) {
    const std::string n = std::to_string(j + 1);
    sys.observables.push_back({"Iz" + n, embed(s2.sz, j + 1, sys.dims), -0.5, 0.5});
    sys.observables.push_back({"Ix" + n, embed(s2.sx, j + 1, sys.dims), -0.5, 0.5});
    sys.observables.push_back({"Iy" + n, embed(s2.sy, j + 1, sys.dims), -0.5, 0.5});
  }
  sys.phase_sign = level_energy_sign(sys);
  return sys;
}

SpinSystem make_nv_system(const NvParams& params, InitialState init) {
  SpinSystem sys;
  sys.model = "nv";
  sys.time_unit = "us";
  sys.freq_unit = "MHz";
  sys.dims = {3, 2};
  sys.h0_terms = nv_h0_terms(params);
  sys.h0 = nv_h0(params);
  const SpinOperators s1 = spin_ops(3), s2 = spin_ops(2);
  sys.drive = embed(s1.sx, 0, sys.dims) * 2.0;
  // Levels ordered m_S = +1, 0, −1; computational basis |0⟩ = m_S 0, |1⟩ = m_S −1.
  sys.level0 = 1;
  sys.level1 = 2;
  sys.initial = central_with_targets(sys.dims, 1, init);
  sys.fluorescence_ref = central_with_targets(sys.dims, 1, InitialState::MixedTarget);
  sys.observables.push_back({"F", sys.fluorescence_ref.op() * 2.0, 0.0, 1.0});
  sys.observables.push_back({"Sz", embed(s1.sz, 0, sys.dims), -1.0, 1.0});
  sys.observables.push_back({"Iz", embed(s2.sz, 1, sys.dims), -0.5, 0.5});
  sys.observables.push_back({"Ix", embed(s2.sx, 1, sys.dims), -0.5, 0.5});
  sys.observables.push_back({"Iy", embed(s2.sy, 1, sys.dims), -0.5, 0.5});
  sys.phase_sign = level_energy_sign(sys);
  return sys;
}

}  // namespace ddgate
