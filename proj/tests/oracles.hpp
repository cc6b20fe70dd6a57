#pragma once

// Test-only reference routes kept independent of the library's solver paths:
// Gaussian elimination with partial pivoting for dense solves and a few
// random-matrix generators. The acceptance and unit suites check the library
// against these.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lumplab/matrix.hpp"
#include "lumplab/types.hpp"

namespace oracle {

using lumplab::Matrix;
using lumplab::Rng;
using lumplab::SymMatrix;
using lumplab::Vec;

/// Dense solve by Gaussian elimination with partial pivoting.
inline Vec dense_solve(const SymMatrix& a_in, const Vec& rhs) {
  const std::size_t n = a_in.dim();
  Matrix a = a_in.dense();
  Vec b = rhs;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
    if (a(piv, col) == 0.0) throw std::runtime_error("oracle: singular matrix");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x[k];
    x[i] = s / a(i, i);
  }
  return x;
}

inline Vec random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline SymMatrix random_symmetric(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a.set(i, j, rng.uniform(lo, hi));
  return a;
}

/// Random SPD matrix G^T G + shift I.
inline SymMatrix random_spd(Rng& rng, std::size_t n, double shift = 0.5) {
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g(k, i) * g(k, j);
      a.set(i, j, s + (i == j ? shift : 0.0));
    }
  return a;
}

/// Random nonnegative SPD: diagonally dominant with nonnegative entries.
inline SymMatrix random_nonnegative_spd(Rng& rng, std::size_t n) {
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) a.set(i, j, rng.uniform(0.0, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row += a(i, j);
    a.set(i, i, row + rng.uniform(0.1, 1.0));
  }
  return a;
}

/// Random banded SPD with the given bandwidth (diagonally dominant).
inline SymMatrix random_banded_spd(Rng& rng, std::size_t n, std::size_t bw) {
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i > bw ? i - bw : 0); j < i; ++j) a.set(i, j, rng.uniform(-1.0, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row += std::fabs(a(i, j));
    a.set(i, i, row + rng.uniform(0.5, 1.5));
  }
  return a;
}

/// Symmetric matrix whose n2 x n2 blocks are themselves symmetric (the class
/// closed under sums of Kronecker products of symmetric factors).
inline SymMatrix random_symmetric_blocks(Rng& rng, std::size_t n1, std::size_t n2) {
  SymMatrix m(n1 * n2);
  for (std::size_t bi = 0; bi < n1; ++bi)
    for (std::size_t bj = 0; bj <= bi; ++bj) {
      SymMatrix block = random_symmetric(rng, n2);
      for (std::size_t a = 0; a < n2; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
          m.set(bi * n2 + a, bj * n2 + b, block(a, b));
        }
    }
  return m;
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

inline double rel_err(const Vec& got, const Vec& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

/// Least-squares slope of log(err) against log(h).
inline double loglog_slope(const Vec& h, const Vec& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(std::fabs(err[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
