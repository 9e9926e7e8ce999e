// Small dense helpers: singular values via Jacobi on the Gram matrix,
// and least-squares through normal equations.  Sized for the tiny
// matrices (<= 6 columns) this project needs.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace supint {

// Row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }
};

namespace detail {

// Cyclic Jacobi eigenvalues of a small symmetric matrix (in place).
inline std::vector<double> jacobi_eigenvalues(Matrix s) {
  const std::size_t n = s.rows;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += s(i, j) * s(i, j);
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (s(p, q) == 0.0) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s(k, p), skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s(p, k), sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = s(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<double>());
  return ev;
}

}  // namespace detail

// Singular values of an m x n matrix, descending; computed from the
// smaller Gram matrix.
inline std::vector<double> singular_values(const Matrix& m) {
  const bool wide = m.cols >= m.rows;
  const std::size_t k = wide ? m.rows : m.cols;
  Matrix g(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      if (wide)
        for (std::size_t l = 0; l < m.cols; ++l) s += m(i, l) * m(j, l);
      else
        for (std::size_t l = 0; l < m.rows; ++l) s += m(l, i) * m(l, j);
      g(i, j) = s;
    }
  std::vector<double> ev = detail::jacobi_eigenvalues(g);
  for (double& e : ev) e = std::sqrt(std::max(e, 0.0));
  return ev;
}

inline int numerical_rank(const Matrix& m, double rel_tol) {
  const std::vector<double> sv = singular_values(m);
  if (sv.empty() || sv[0] == 0.0) return 0;
  int r = 0;
  for (double s : sv)
    if (s > rel_tol * sv[0]) ++r;
  return r;
}

// Least-squares solution of A x = b through the normal equations with
// Gaussian elimination (partial pivoting).  Fine for well-conditioned
// small systems.
inline std::vector<double> solve_least_squares(const Matrix& A,
                                               const std::vector<double>& b) {
  if (A.rows != b.size()) throw std::invalid_argument("size mismatch");
  const std::size_t n = A.cols;
  Matrix m(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < A.rows; ++l) s += A(l, i) * A(l, j);
      m(i, j) = s;
    }
    double s = 0.0;
    for (std::size_t l = 0; l < A.rows; ++l) s += A(l, i) * b[l];
    m(i, n) = s;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(m(i, col)) > std::abs(m(piv, col))) piv = i;
    if (m(piv, col) == 0.0)
      throw std::runtime_error("singular normal equations");
    if (piv != col)
      for (std::size_t j = col; j <= n; ++j) std::swap(m(piv, j), m(col, j));
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = m(i, col) / m(col, col);
      for (std::size_t j = col; j <= n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m(i, n) / m(i, i);
  return x;
}

}  // namespace supint
