#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "ddgate/algebra.hpp"

namespace testing {

using ddgate::cplx;
using ddgate::Matrix;

inline Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

inline ddgate::DensityMatrix random_state(std::mt19937_64& rng, std::vector<std::size_t> dims) {
  const auto n = static_cast<Eigen::Index>(ddgate::dims_product(dims));
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return ddgate::DensityMatrix(ddgate::Operator(rho, std::move(dims)));
}

inline Matrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Matrix h = random_hermitian(rng, n);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXcd ph(n);
  for (Eigen::Index k = 0; k < n; ++k) ph(k) = std::polar(1.0, es.eigenvalues()(k));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(−i2π·t·H) by scaling-and-squaring of a truncated Taylor series.
inline Matrix taylor_propagator(const Matrix& h, double t) {
  const Matrix a = cplx(0, -2.0 * std::numbers::pi * t) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Matrix b = a / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(h.rows(), h.cols()), sum = term;
  for (int k = 1; k < 30; ++k) {
    term = (term * b / static_cast<double>(k)).eval();
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
  return sum;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
