#include "ddgate/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ddgate/errors.hpp"

namespace ddgate {

// --- SweepResult ------------------------------------------------------------

const std::vector<double>& SweepResult::trace(const std::string& label) const {
  for (const auto& [name, values] : traces)
    if (name == label) return values;
  throw std::invalid_argument("SweepResult: no trace '" + label + "'");
}

bool SweepResult::has_trace(const std::string& label) const {
  return std::any_of(traces.begin(), traces.end(), [&](const auto& t) { return t.first == label; });
}

void SweepResult::add_trace(std::string label, std::vector<double> values) {
  if (values.size() != axis_values.size())
    throw std::invalid_argument("SweepResult: trace '" + label + "' has " +
                                std::to_string(values.size()) + " values for " +
                                std::to_string(axis_values.size()) + " axis points");
  if (has_trace(label)) throw std::invalid_argument("SweepResult: duplicate trace '" + label + "'");
  traces.emplace_back(std::move(label), std::move(values));
}

void SweepResult::validate() const {
  for (const auto& [name, values] : traces)
    if (values.size() != axis_values.size())
      throw std::invalid_argument("SweepResult: trace '" + name + "' length mismatch");
}

// --- expectation values -------------------------------------------------------

double expval(const DensityMatrix& rho, const Operator& obs) {
  if (rho.dims() != obs.dims()) throw std::invalid_argument("expval: dimension mismatch");
  if (!obs.is_hermitian()) throw std::invalid_argument("expval: observable is not Hermitian");
  const cplx v = (rho.matrix().transpose().cwiseProduct(obs.matrix())).sum();
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, obs.max_abs()))
    throw NumericError("expval: imaginary residue " + std::to_string(v.imag()));
  return v.real();
}

double fluorescence(const DensityMatrix& rho0, const DensityMatrix& rhof) {
  if (rho0.dims() != rhof.dims()) throw std::invalid_argument("fluorescence: dimension mismatch");
  return 2.0 * (rho0.matrix().transpose().cwiseProduct(rhof.matrix())).sum().real();
}

// --- tomography ---------------------------------------------------------------

namespace {

Operator pauli(char c) {
  using namespace std::complex_literals;
  Matrix m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -1i, 1i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument(std::string("unknown Pauli '") + c + "'");
  }
  return Operator(m);
}

std::size_t qubit_count(const DensityMatrix& rho) {
  for (auto d : rho.dims())
    if (d != 2) throw std::invalid_argument("expected a register of qubits");
  return rho.dims().size();
}

// √ of a PSD matrix. Eigenvalues below the solver's round-off floor are zeroed;
// their square roots would otherwise leak ~1e-8 into rank-deficient fidelities.
Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() *
                       static_cast<double>(ev.size()) * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd s(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) s(k) = ev(k) > floor ? std::sqrt(ev(k)) : 0.0;
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

// Tr√(√a b √a) as the nuclear norm of √a √b.
double root_overlap(const Matrix& a, const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(psd_sqrt(a) * psd_sqrt(b));
  return svd.singularValues().sum();
}

}  // namespace

std::vector<std::string> pauli_labels(std::size_t n_qubits) {
  if (n_qubits == 0) throw std::invalid_argument("pauli_labels: need at least one qubit");
  static const char kAlphabet[] = {'I', 'X', 'Y', 'Z'};
  std::size_t total = 1;
  for (std::size_t k = 0; k < n_qubits; ++k) total *= 4;
  std::vector<std::string> out;
  out.reserve(total - 1);
  for (std::size_t code = 1; code < total; ++code) {
    std::string s(n_qubits, 'I');
    std::size_t c = code;
    for (std::size_t k = n_qubits; k-- > 0;) {
      s[k] = kAlphabet[c % 4];
      c /= 4;
    }
    out.push_back(std::move(s));
  }
  return out;
}

Operator pauli_product(const std::string& label) {
  if (label.empty()) throw std::invalid_argument("pauli_product: empty label");
  std::vector<Operator> factors;
  for (char c : label) factors.push_back(pauli(c));
  return tensor(factors);
}

std::vector<double> measure_paulis(const DensityMatrix& rho) {
  const std::size_t n = qubit_count(rho);
  std::vector<double> out;
  for (const auto& label : pauli_labels(n)) out.push_back(expval(rho, pauli_product(label)));
  return out;
}

DensityMatrix tomography(const std::vector<double>& expectations, std::size_t n_qubits) {
  if (n_qubits < 1 || n_qubits > 4)
    throw std::invalid_argument("tomography: supports 1 to 4 qubits");
  const auto labels = pauli_labels(n_qubits);
  if (expectations.size() != labels.size())
    throw std::invalid_argument("tomography: incomplete observable set (" +
                                std::to_string(expectations.size()) + " of " +
                                std::to_string(labels.size()) + ")");
  const std::vector<std::size_t> dims(n_qubits, 2);
  const auto side = static_cast<Eigen::Index>(dims_product(dims));
  Matrix rho = Matrix::Identity(side, side);
  for (std::size_t k = 0; k < labels.size(); ++k)
    rho += expectations[k] * pauli_product(labels[k]).matrix();
  rho /= static_cast<double>(side);
  rho = 0.5 * (rho + rho.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  const double total = vals.sum();
  if (!(total > 0)) throw NumericError("tomography: reconstruction has no positive weight");
  vals /= total;
  Matrix out = es.eigenvectors() * vals.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(Operator(std::move(out), dims), "tomography");
}

// --- state metrics ------------------------------------------------------------

double root_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::clamp(root_overlap(rho.matrix(), sigma.matrix()), 0.0, 1.0);
}

double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double f = root_fidelity(rho, sigma);
  return f * f;
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dims() != std::vector<std::size_t>{2, 2})
    throw std::invalid_argument("concurrence: requires a two-qubit state");
  const Matrix yy = pauli_product("YY").matrix();
  const Matrix tilde = yy * rho.matrix().conjugate() * yy;
  // √eig(ρ ρ̃) are the singular values of √ρ √ρ̃ (descending).
  Eigen::JacobiSVD<Matrix> svd(psd_sqrt(rho.matrix()) * psd_sqrt(tilde));
  const Eigen::VectorXd l = svd.singularValues();
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

// --- pseudo-fidelity fit --------------------------------------------------------

namespace {

struct LinearCosine {
  double a, c1, c2, sse;
};

LinearCosine fit_at_period(const std::vector<double>& n, const std::vector<double>& y, double t) {
  const auto m = static_cast<Eigen::Index>(n.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double ph = 2.0 * std::numbers::pi * n[i] / t;
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(ph);
    design(i, 2) = std::sin(ph);
    rhs(i) = y[i];
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
  return {c(0), c(1), c(2), (design * c - rhs).squaredNorm()};
}

}  // namespace

CosineFit pseudo_fidelity(const std::vector<double>& n, const std::vector<double>& y,
                          double range) {
  if (n.size() != y.size()) throw std::invalid_argument("pseudo_fidelity: length mismatch");
  if (n.size() < 5) throw std::invalid_argument("pseudo_fidelity: need at least 5 samples");
  if (!(range > 0)) throw std::invalid_argument("pseudo_fidelity: range must be > 0");
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n.size(); ++i) {
    if (!(n[i] > n[i - 1])) throw std::invalid_argument("pseudo_fidelity: n must increase");
    spacing = std::min(spacing, n[i] - n[i - 1]);
  }
  const double span = n.back() - n.front();
  const double t_min = 3.0 * spacing, t_max = 1.05 * span;
  if (t_max <= t_min)
    throw std::invalid_argument("pseudo_fidelity: series shorter than one oscillation");

  // Log-spaced scan of the period, then golden-section refinement around the
  // best sample.
  constexpr int kScan = 4000;
  const double ratio = std::log(t_max / t_min) / (kScan - 1);
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kScan; ++k) {
    const double sse = fit_at_period(n, y, t_min * std::exp(ratio * k)).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best = k;
    }
  }
  double lo = t_min * std::exp(ratio * std::max(0, best - 1));
  double hi = t_min * std::exp(ratio * std::min(kScan - 1, best + 1));
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = fit_at_period(n, y, c).sse, fd = fit_at_period(n, y, d).sse;
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = fit_at_period(n, y, c).sse;
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = fit_at_period(n, y, d).sse;
    }
  }
  const double period = 0.5 * (lo + hi);
  const LinearCosine lc = fit_at_period(n, y, period);

  CosineFit out;
  out.period = period;
  out.offset = lc.a;
  out.b = std::hypot(lc.c1, lc.c2);
  out.phase = std::atan2(-lc.c2, lc.c1);
  out.amplitude = 2.0 * out.b / range;
  out.rms_residual = std::sqrt(lc.sse / static_cast<double>(n.size())) / range;
  if (out.rms_residual > 0.15) {
    std::ostringstream msg;
    msg << "pseudo_fidelity: rms residual " << out.rms_residual << " of range exceeds 0.15 "
        << "(best period " << period << ", amplitude " << out.amplitude << ")";
    throw NumericError(msg.str());
  }
  return out;
}

// --- resonance location ----------------------------------------------------------

Resonance find_resonance(const std::vector<double>& x, const std::vector<double>& y,
                         bool minimum) {
  if (x.size() != y.size()) throw std::invalid_argument("find_resonance: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("find_resonance: need at least 3 samples");
  const auto it = minimum ? std::min_element(y.begin(), y.end())
                          : std::max_element(y.begin(), y.end());
  const auto i = static_cast<std::size_t>(it - y.begin());
  if (i == 0 || i + 1 == y.size())
    throw NumericError("find_resonance: extremum at grid boundary x=" + std::to_string(x[i]));
  const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
  const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
  const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0);
  if (curv == 0) return {x1, y1, i};
  const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
  const double yv = y1 + d01 * (xv - x1) + curv * (xv - x0) * (xv - x1);
  return {std::clamp(xv, x0, x2), yv, i};
}

Resonance find_resonance(const SweepResult& sweep, const std::string& label, bool minimum) {
  return find_resonance(sweep.axis_values, sweep.trace(label), minimum);
}

// --- baseline correction -----------------------------------------------------------

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int order,
                            const std::vector<bool>* exclude) {
  if (order < 0) throw std::invalid_argument("polyfit: order must be >= 0");
  if (x.size() != y.size()) throw std::invalid_argument("polyfit: length mismatch");
  std::vector<std::size_t> use;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!exclude || !(*exclude)[i]) use.push_back(i);
  const int cols = order + 1;
  if (use.size() < static_cast<std::size_t>(cols)) throw NumericError("polyfit: degenerate fit");
  Eigen::MatrixXd v(static_cast<Eigen::Index>(use.size()), cols);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(use.size()));
  for (std::size_t r = 0; r < use.size(); ++r) {
    double p = 1;
    for (int c = 0; c < cols; ++c) {
      v(static_cast<Eigen::Index>(r), c) = p;
      p *= x[use[r]];
    }
    rhs(static_cast<Eigen::Index>(r)) = y[use[r]];
  }
  const auto qr = v.colPivHouseholderQr();
  if (qr.rank() < cols) throw NumericError("polyfit: degenerate fit (singular normal equations)");
  const Eigen::VectorXd c = qr.solve(rhs);
  return std::vector<double>(c.data(), c.data() + c.size());
}

namespace {

double polyval(const std::vector<double>& c, double x) {
  double acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
  return acc;
}

}  // namespace

BaselineResult baseline_correct(const std::vector<double>& x, const std::vector<double>& y,
                                int order) {
  if (order < 0) throw std::invalid_argument("baseline_correct: order must be >= 0");
  if (x.size() != y.size()) throw std::invalid_argument("baseline_correct: length mismatch");
  if (x.size() <= static_cast<std::size_t>(order) + 1)
    throw std::invalid_argument("baseline_correct: series too short for the order");

  BaselineResult out;
  out.masked.assign(x.size(), false);
  auto coeffs = polyfit(x, y, order);
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<double> r(x.size());
    double ss = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      r[i] = y[i] - polyval(coeffs, x[i]);
      if (!out.masked[i]) {
        ss += r[i] * r[i];
        ++cnt;
      }
    }
    const double sigma = std::sqrt(ss / static_cast<double>(std::max<std::size_t>(cnt, 1)));
    std::vector<bool> mask(x.size(), false);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mask[i] = sigma > 0 && std::abs(r[i]) > 2.0 * sigma;
      kept += !mask[i];
    }
    if (kept <= static_cast<std::size_t>(order) + 1) break;
    out.masked = std::move(mask);
    coeffs = polyfit(x, y, order, &out.masked);
  }

  out.baseline.resize(x.size());
  out.residual.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.baseline[i] = polyval(coeffs, x[i]);
    out.residual[i] = y[i] - out.baseline[i];
  }
  const auto [mn, mx] = std::minmax_element(out.residual.begin(), out.residual.end());
  const double scale = std::max(1.0, *std::max_element(y.begin(), y.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  }));
  const double span = *mx - *mn;
  out.normalized = out.residual;
  if (span > 1e-9 * std::abs(scale))
    for (auto& v : out.normalized) v = (v - *mn) / span;
  return out;
}

// --- T_π scaling ----------------------------------------------------------------------

ScalingFit tpi_scaling(const std::vector<std::pair<double, double>>& fits) {
  if (fits.size() < 4) throw std::invalid_argument("tpi_scaling: need at least 4 coupling values");
  double num = 0, den = 0;
  for (const auto& [a, t] : fits) {
    if (!(a > 0) || !(t > 0)) throw std::invalid_argument("tpi_scaling: A and T_pi must be > 0");
    num += t / a;
    den += 1.0 / (a * a);
  }
  ScalingFit out;
  out.c = num / den;
  for (const auto& [a, t] : fits) out.relative_residuals.push_back((t - out.c / a) / t);
  for (double r : out.relative_residuals)
    if (std::abs(r) > 0.10)
      throw NumericError("tpi_scaling: relative residual " + std::to_string(r) +
                         " exceeds 10% (c = " + std::to_string(out.c) + ")");
  return out;
}

}  // namespace ddgate
