#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ddgate {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Dense square operator on a product space. `dims` lists the subsystem
/// dimensions in site order; their product is the matrix side.
class Operator {
public:
  Operator() = default;
  Operator(Matrix data, std::vector<std::size_t> dims);
  /// Single-site operator; dims = {rows}.
  explicit Operator(Matrix data);

  static Operator identity(std::vector<std::size_t> dims);
  static Operator zero(std::vector<std::size_t> dims);

  const Matrix& matrix() const { return data_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t side() const { return static_cast<std::size_t>(data_.rows()); }
  std::size_t sites() const { return dims_.size(); }

  cplx operator()(std::size_t r, std::size_t c) const { return data_(r, c); }

  Operator adjoint() const;
  cplx trace() const { return data_.trace(); }
  double max_abs() const;
  /// max|H − H†| relative to max|H| (absolute when H is zero).
  double hermiticity_error() const;
  bool is_hermitian(double rel_tol = 1e-10) const;

  Operator operator+(const Operator& other) const;
  Operator operator-(const Operator& other) const;
  Operator operator*(const Operator& other) const;
  Operator operator*(cplx s) const;
  Operator operator*(double s) const;
  friend Operator operator*(double s, const Operator& op) { return op * s; }
  friend Operator operator*(cplx s, const Operator& op) { return op * s; }

private:
  void check_same_dims(const Operator& other, const char* what) const;

  Matrix data_;
  std::vector<std::size_t> dims_;
};

/// Unit-trace, Hermitian, positive semidefinite operator.
class DensityMatrix {
public:
  DensityMatrix() = default;
  /// Validates the state invariants (trace, Hermiticity, eigenvalue floor).
  explicit DensityMatrix(Operator op, std::string label = {});

  static DensityMatrix pure(const Eigen::VectorXcd& ket, std::vector<std::size_t> dims,
                            std::string label = {});
  /// |index⟩⟨index| in the product basis.
  static DensityMatrix basis(std::size_t index, std::vector<std::size_t> dims,
                             std::string label = {});
  static DensityMatrix maximally_mixed(std::vector<std::size_t> dims, std::string label = {});

  const Operator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const std::vector<std::size_t>& dims() const { return op_.dims(); }
  const std::string& label() const { return label_; }
  double purity() const;

private:
  Operator op_;
  std::string label_;
};

struct SpinOperators {
  Operator sx, sy, sz;
};

/// Spin-(d−1)/2 matrices for d ∈ {2, 3}; sz is diagonal with descending
/// projections.
SpinOperators spin_ops(std::size_t d);

/// Kronecker product in the given order; dims concatenate.
Operator tensor(std::span<const Operator> factors);
Operator tensor(std::initializer_list<Operator> factors);

/// `op` on `site`, identity everywhere else.
Operator embed(const Operator& op, std::size_t site, const std::vector<std::size_t>& dims);

struct EigenDecomposition {
  RealVector values;  // ascending
  Operator vectors;   // columns are eigenvectors
};

EigenDecomposition eig_hermitian(const Operator& h);

/// exp[−i 2π · duration · h] (ordinary-frequency convention).
Operator herm_propagator(const Operator& h, double duration);
/// Same, reusing a precomputed decomposition.
Operator herm_propagator(const EigenDecomposition& eig, double duration);

/// Reduced state on the `keep` sites, in original site order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

/// ρ → U ρ U†
DensityMatrix evolve(const DensityMatrix& rho, const Operator& u);

std::size_t dims_product(const std::vector<std::size_t>& dims);

}  // namespace ddgate
