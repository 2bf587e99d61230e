#include "ddgate/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ddgate {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kEigenFloor = -1e-9;

std::string dims_string(const std::vector<std::size_t>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

}  // namespace

std::size_t dims_product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

Operator::Operator(Matrix data, std::vector<std::size_t> dims)
    : data_(std::move(data)), dims_(std::move(dims)) {
  if (data_.rows() != data_.cols()) throw std::invalid_argument("Operator: matrix is not square");
  if (dims_.empty()) throw std::invalid_argument("Operator: empty dimension list");
  if (dims_product(dims_) != static_cast<std::size_t>(data_.rows()))
    throw std::invalid_argument("Operator: dims " + dims_string(dims_) +
                                " do not match side " + std::to_string(data_.rows()));
}

Operator::Operator(Matrix data) : Operator(data, {static_cast<std::size_t>(data.rows())}) {}

Operator Operator::identity(std::vector<std::size_t> dims) {
  const auto n = static_cast<Eigen::Index>(dims_product(dims));
  return Operator(Matrix::Identity(n, n), std::move(dims));
}

Operator Operator::zero(std::vector<std::size_t> dims) {
  const auto n = static_cast<Eigen::Index>(dims_product(dims));
  return Operator(Matrix::Zero(n, n), std::move(dims));
}

Operator Operator::adjoint() const { return Operator(data_.adjoint(), dims_); }

double Operator::max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : 0.0; }

double Operator::hermiticity_error() const {
  const double diff = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
  const double scale = max_abs();
  return scale > 0 ? diff / scale : diff;
}

bool Operator::is_hermitian(double rel_tol) const { return hermiticity_error() <= rel_tol; }

void Operator::check_same_dims(const Operator& other, const char* what) const {
  if (dims_ != other.dims_)
    throw std::invalid_argument(std::string("Operator ") + what + ": dims " +
                                dims_string(dims_) + " vs " + dims_string(other.dims_));
}

Operator Operator::operator+(const Operator& other) const {
  check_same_dims(other, "+");
  return Operator(data_ + other.data_, dims_);
}

Operator Operator::operator-(const Operator& other) const {
  check_same_dims(other, "-");
  return Operator(data_ - other.data_, dims_);
}

Operator Operator::operator*(const Operator& other) const {
  check_same_dims(other, "*");
  return Operator(data_ * other.data_, dims_);
}

Operator Operator::operator*(cplx s) const { return Operator(data_ * s, dims_); }
Operator Operator::operator*(double s) const { return Operator(data_ * s, dims_); }

// --- DensityMatrix ---------------------------------------------------------

DensityMatrix::DensityMatrix(Operator op, std::string label)
    : op_(std::move(op)), label_(std::move(label)) {
  const cplx tr = op_.trace();
  if (std::abs(tr - 1.0) > kStateTol)
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");
  const double herm = (op_.matrix() - op_.matrix().adjoint()).cwiseAbs().maxCoeff();
  if (herm > kStateTol) throw std::invalid_argument("DensityMatrix: not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op_.matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenFloor)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& ket, std::vector<std::size_t> dims,
                                  std::string label) {
  const double norm = ket.norm();
  if (norm == 0) throw std::invalid_argument("DensityMatrix::pure: zero vector");
  const Eigen::VectorXcd v = ket / norm;
  return DensityMatrix(Operator(v * v.adjoint(), std::move(dims)), std::move(label));
}

DensityMatrix DensityMatrix::basis(std::size_t index, std::vector<std::size_t> dims,
                                   std::string label) {
  const std::size_t n = dims_product(dims);
  if (index >= n) throw std::invalid_argument("DensityMatrix::basis: index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return pure(v, std::move(dims), std::move(label));
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<std::size_t> dims, std::string label) {
  const auto n = static_cast<double>(dims_product(dims));
  return DensityMatrix(Operator::identity(std::move(dims)) * (1.0 / n), std::move(label));
}

double DensityMatrix::purity() const { return (op_.matrix() * op_.matrix()).trace().real(); }

// --- spin operators and products ------------------------------------------

SpinOperators spin_ops(std::size_t d) {
  using namespace std::complex_literals;
  if (d == 2) {
    Matrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 0.5, 0.5, 0;
    sy << 0, -0.5i, 0.5i, 0;
    sz << 0.5, 0, 0, -0.5;
    return {Operator(sx), Operator(sy), Operator(sz)};
  }
  if (d == 3) {
    const double r = 1.0 / std::numbers::sqrt2;
    Matrix sx(3, 3), sy(3, 3), sz(3, 3);
    sx << 0, r, 0, r, 0, r, 0, r, 0;
    sy << 0, -1i * r, 0, 1i * r, 0, -1i * r, 0, 1i * r, 0;
    sz << 1, 0, 0, 0, 0, 0, 0, 0, -1;
    return {Operator(sx), Operator(sy), Operator(sz)};
  }
  throw std::invalid_argument("spin_ops: unsupported dimension " + std::to_string(d));
}

Operator tensor(std::span<const Operator> factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: empty factor list");
  Matrix acc = factors.front().matrix();
  std::vector<std::size_t> dims = factors.front().dims();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    const Matrix& b = factors[k].matrix();
    Matrix next(acc.rows() * b.rows(), acc.cols() * b.cols());
    for (Eigen::Index i = 0; i < acc.rows(); ++i)
      for (Eigen::Index j = 0; j < acc.cols(); ++j)
        next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = acc(i, j) * b;
    acc = std::move(next);
    dims.insert(dims.end(), factors[k].dims().begin(), factors[k].dims().end());
  }
  return Operator(std::move(acc), std::move(dims));
}

Operator tensor(std::initializer_list<Operator> factors) {
  return tensor(std::span<const Operator>(factors.begin(), factors.size()));
}

Operator embed(const Operator& op, std::size_t site, const std::vector<std::size_t>& dims) {
  if (site >= dims.size()) throw std::invalid_argument("embed: site out of range");
  if (op.side() != dims[site])
    throw std::invalid_argument("embed: operator side " + std::to_string(op.side()) +
                                " != dims[" + std::to_string(site) + "]");
  std::vector<Operator> factors;
  factors.reserve(dims.size());
  for (std::size_t s = 0; s < dims.size(); ++s)
    factors.push_back(s == site ? Operator(op.matrix()) : Operator::identity({dims[s]}));
  return tensor(factors);
}

// --- spectral functions ----------------------------------------------------

EigenDecomposition eig_hermitian(const Operator& h) {
  if (!h.is_hermitian(1e-10)) throw std::invalid_argument("eig_hermitian: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: solver failed");
  return {es.eigenvalues(), Operator(es.eigenvectors(), h.dims())};
}

Operator herm_propagator(const EigenDecomposition& eig, double duration) {
  if (duration < 0) throw std::invalid_argument("herm_propagator: negative duration");
  const Matrix& v = eig.vectors.matrix();
  Eigen::VectorXcd phases(eig.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases(k) = std::polar(1.0, -2.0 * std::numbers::pi * duration * eig.values(k));
  return Operator(v * phases.asDiagonal() * v.adjoint(), eig.vectors.dims());
}

Operator herm_propagator(const Operator& h, double duration) {
  if (duration < 0) throw std::invalid_argument("herm_propagator: negative duration");
  return herm_propagator(eig_hermitian(h), duration);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
  const auto& dims = rho.dims();
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t s : keep) {
    if (s >= dims.size()) throw std::invalid_argument("partial_trace: site out of range");
    kept[s] = true;
  }
  std::vector<std::size_t> keep_sites, trace_sites, out_dims;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (kept[s]) {
      keep_sites.push_back(s);
      out_dims.push_back(dims[s]);
    } else {
      trace_sites.push_back(s);
    }
  }
  const std::size_t n_out = dims_product(out_dims);
  std::vector<std::size_t> traced_dims;
  for (std::size_t s : trace_sites) traced_dims.push_back(dims[s]);
  const std::size_t n_tr = dims_product(traced_dims);

  // Row-major mixed-radix strides of the full space.
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;) stride[s - 1] = stride[s] * dims[s];

  auto full_index = [&](std::size_t kept_idx, std::size_t traced_idx) {
    std::size_t idx = 0;
    for (std::size_t k = keep_sites.size(); k-- > 0;) {
      idx += (kept_idx % dims[keep_sites[k]]) * stride[keep_sites[k]];
      kept_idx /= dims[keep_sites[k]];
    }
    for (std::size_t k = trace_sites.size(); k-- > 0;) {
      idx += (traced_idx % dims[trace_sites[k]]) * stride[trace_sites[k]];
      traced_idx /= dims[trace_sites[k]];
    }
    return static_cast<Eigen::Index>(idx);
  };

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n_out), static_cast<Eigen::Index>(n_out));
  const Matrix& m = rho.matrix();
  for (std::size_t i = 0; i < n_out; ++i)
    for (std::size_t j = 0; j < n_out; ++j) {
      cplx acc = 0;
      for (std::size_t t = 0; t < n_tr; ++t) acc += m(full_index(i, t), full_index(j, t));
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  return DensityMatrix(Operator(std::move(out), std::move(out_dims)), rho.label());
}

DensityMatrix evolve(const DensityMatrix& rho, const Operator& u) {
  Matrix r = u.matrix() * rho.matrix() * u.matrix().adjoint();
  r = 0.5 * (r + r.adjoint()).eval();
  return DensityMatrix(Operator(std::move(r), rho.dims()), rho.label());
}

}  // namespace ddgate
