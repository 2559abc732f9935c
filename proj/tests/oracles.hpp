#pragma once
// Independent oracles for the test suites. Each computes its value by a
// route disjoint from the library implementation (direct quadrature, dense
// DFT matrices + SVD, finite differences), so agreement is evidence rather
// than tautology.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bhs/field.hpp"
#include "bhs/grid.hpp"
#include "bhs/operator_norm.hpp"

namespace oracle {

// Composite Simpson rule for a complex integrand on [a, b] with n panels
// (n even).
inline std::complex<double> simpson(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int n) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  std::complex<double> acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  return acc * (h / 3.0);
}

// Central five-point finite-difference derivative.
inline double fd_derivative(const std::function<double(double)>& f, double x,
                            double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// Observed convergence order from values at h, h/2, h/4.
inline double richardson_order(double vh, double vh2, double vh4) {
  return std::log2(std::abs(vh - vh2) / std::abs(vh2 - vh4));
}

// Dense matrix of a linear map acting on fields over `grid` (in the given
// representation), built by probing with the standard basis.
inline Eigen::MatrixXcd dense_matrix(const bhs::GridSpec& grid,
                                     const bhs::LinearMap& map,
                                     bhs::FieldRep rep = bhs::FieldRep::Position) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    bhs::ComplexField e(grid, rep);
    e[static_cast<std::size_t>(j)] = 1.0;
    const bhs::ComplexField col = map.forward(e);
    for (Eigen::Index i = 0; i < n; ++i)
      m(i, j) = col[static_cast<std::size_t>(i)];
  }
  return m;
}

inline double top_singular_value(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

// 1D dense DFT pair matching the raw-FFT index convention: row k of dft()
// is sum_j exp(-2 pi i k j / N). Used to assemble spectral multipliers as
// dense matrices without the FFT backend.
inline Eigen::MatrixXcd dft_matrix_1d(int n) {
  Eigen::MatrixXcd m(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      const double ph = -2.0 * M_PI * k * j / n;
      m(k, j) = std::complex<double>(std::cos(ph), std::sin(ph));
    }
  return m;
}

inline Eigen::MatrixXcd idft_matrix_1d(int n) {
  Eigen::MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double ph = 2.0 * M_PI * j * k / n;
      m(j, k) = std::complex<double>(std::cos(ph), std::sin(ph)) / double(n);
    }
  return m;
}

// Dense 1D spectral multiplier diag(m(q_k)) conjugated by the DFT pair:
// the matrix of m(P) acting on position samples.
inline Eigen::MatrixXcd dense_multiplier_1d(
    const bhs::GridSpec& grid, const std::function<std::complex<double>(double)>& m) {
  const int n = grid.points[0];
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) diag(k, k) = m(grid.q(0, k));
  return idft_matrix_1d(n) * diag * dft_matrix_1d(n);
}

// Dense 1D position weight diag(w(x_j)).
inline Eigen::MatrixXcd dense_weight_1d(
    const bhs::GridSpec& grid, const std::function<std::complex<double>(double)>& w) {
  const int n = grid.points[0];
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) diag(j, j) = w(grid.x(0, j));
  return diag;
}

}  // namespace oracle
