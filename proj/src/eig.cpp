#include "lumplab/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lumplab {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

/// Cyclic Jacobi with the two-sided rotation of Rutishauser. Robust for the
/// small dense blocks this library mostly sees.
void jacobi_eig(Matrix& a, Matrix& v, double tol) {
  const std::size_t n = a.rows();
  const std::size_t max_sweeps = 100;
  const double scale = std::max(a.frobenius_norm(), 1e-300);
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = off_diagonal_norm(a);
    if (off <= tol * scale) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double h = t * apq;
        a(p, p) -= h;
        a(q, q) += h;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i != p && i != q) {
            const double aip = a(i, p);
            const double aiq = a(i, q);
            a(i, p) = aip - s * (aiq + tau * aip);
            a(i, q) = aiq + s * (aip - tau * aiq);
            a(p, i) = a(i, p);
            a(q, i) = a(i, q);
          }
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = vip - s * (viq + tau * vip);
          v(i, q) = viq + s * (vip - tau * viq);
        }
      }
    }
  }
  double off = off_diagonal_norm(a);
  if (off > tol * scale) throw NonConvergence("Jacobi eigensolver exceeded sweep cap", off);
}

/// Householder reduction to tridiagonal form with accumulated transformations.
/// On exit d holds the diagonal, e the subdiagonal (e[0] unused), and a the
/// orthogonal matrix Q with Q^T A Q tridiagonal.
void householder_tridiag(Matrix& a, Vec& d, Vec& e) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
        e[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          a(j, i) = a(i, j) / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
          e[j] = g / h;
          f += e[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = a(i, j);
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
        }
      }
    } else {
      e[i] = a(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] != 0.0) {
      for (std::size_t j = 0; j < i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
        for (std::size_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
      }
    }
    d[i] = a(i, i);
    a(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      a(j, i) = 0.0;
      a(i, j) = 0.0;
    }
  }
}

double pythag(double a, double b) {
  const double absa = std::fabs(a), absb = std::fabs(b);
  if (absa > absb) {
    const double r = absb / absa;
    return absa * std::sqrt(1.0 + r * r);
  }
  if (absb == 0.0) return 0.0;
  const double r = absa / absb;
  return absb * std::sqrt(1.0 + r * r);
}

/// Implicit-shift QL on a tridiagonal matrix, accumulating rotations into z.
void ql_implicit(Vec& d, Vec& e, Matrix& z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    std::size_t iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-300 || std::fabs(e[m]) <= 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw NonConvergence("QL eigensolver exceeded iteration cap", std::fabs(e[l]));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = pythag(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = pythag(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (r == 0.0 && m - l > 1) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

void sort_ascending(Vec& values, Matrix& vectors) {
  const std::size_t n = values.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  Vec sorted(n);
  Matrix sorted_vecs(vectors.rows(), n);
  for (std::size_t k = 0; k < n; ++k) {
    sorted[k] = values[perm[k]];
    for (std::size_t i = 0; i < vectors.rows(); ++i) sorted_vecs(i, k) = vectors(i, perm[k]);
  }
  values = std::move(sorted);
  vectors = std::move(sorted_vecs);
}

}  // namespace

EigResult sym_eig(const SymMatrix& a, double tol) {
  const std::size_t n = a.dim();
  if (n == 0) throw DimensionMismatch("sym_eig on empty matrix");
  if (tol <= 0.0) throw std::invalid_argument("sym_eig requires tol > 0");

  EigResult res;
  if (n == 1) {
    res.values = {a(0, 0)};
    res.vectors = Matrix::identity(1);
    res.orthogonality = 0.0;
    return res;
  }

  Matrix work = a.dense();
  Matrix v = Matrix::identity(n);
  Vec d, e;
  if (n <= 64) {
    jacobi_eig(work, v, tol);
    d.resize(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = work(i, i);
  } else {
    householder_tridiag(work, d, e);
    v = std::move(work);
    ql_implicit(d, e, v);
  }
  sort_ascending(d, v);

  double orth = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += v(k, i) * v(k, j);
      const double err = s - (i == j ? 1.0 : 0.0);
      orth += (i == j ? 1.0 : 2.0) * err * err;
    }

  res.values = std::move(d);
  res.vectors = std::move(v);
  res.orthogonality = std::sqrt(orth);
  return res;
}

SvdResult svd(const Matrix& a, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("svd requires tol > 0");
  const bool transposed = a.rows() < a.cols();
  Matrix u = transposed ? a.transpose() : a;  // m >= n
  const std::size_t m = u.rows(), n = u.cols();
  Matrix v = Matrix::identity(n);

  // Hestenes one-sided Jacobi: orthogonalize column pairs of u. The pair
  // criterion is relative to the column norms and scaled by m*eps (the dot
  // product rounding noise), so tiny singular values settle at the machine
  // noise floor instead of a tol-sized plateau.
  const double pair_tol = std::max(static_cast<double>(m), 16.0) * 2.2e-16;
  const double scale0 = u.frobenius_norm();
  const double col_floor = std::pow(8.0 * 2.2e-16 * scale0, 2);  // columns at noise level
  const std::size_t max_sweeps = 60;
  bool converged = n <= 1;
  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (alpha <= col_floor && beta <= col_floor) continue;
        if (std::fabs(gamma) <= pair_tol * std::sqrt(alpha * beta) + 1e-300) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double up = u(i, p), uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
  }
  if (!converged) {
    // accept when the leftover correlations are still far below tol
    double gmax_rel = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double g = 0.0, a = 0.0, bq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          g += u(i, p) * u(i, q);
          a += u(i, p) * u(i, p);
          bq += u(i, q) * u(i, q);
        }
        if (a > col_floor && bq > col_floor)
          gmax_rel = std::max(gmax_rel, std::fabs(g) / std::sqrt(a * bq));
      }
    if (gmax_rel > std::min(tol, 1e-10))
      throw NonConvergence("one-sided Jacobi SVD exceeded sweep cap", gmax_rel);
  }

  Vec sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += u(i, j) * u(i, j);
    sigma[j] = std::sqrt(s);
  }
  // normalize columns; zero columns get an arbitrary unit vector consistent
  // with orthogonality (identity completion is fine at this scale)
  for (std::size_t j = 0; j < n; ++j) {
    if (sigma[j] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) u(i, j) /= sigma[j];
    }
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult res;
  res.singular_values.resize(n);
  Matrix su(m, n), sv(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    res.singular_values[k] = sigma[perm[k]];
    for (std::size_t i = 0; i < m; ++i) su(i, k) = u(i, perm[k]);
    for (std::size_t i = 0; i < n; ++i) sv(i, k) = v(i, perm[k]);
  }
  if (transposed) {
    res.left = std::move(sv);
    res.right = std::move(su);
  } else {
    res.left = std::move(su);
    res.right = std::move(sv);
  }
  return res;
}

Matrix cholesky(const SymMatrix& a) {
  const std::size_t n = a.dim();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw NotPositiveDefinite("dense Cholesky failed", j);
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Vec forward_solve(const Matrix& l, const Vec& rhs) {
  const std::size_t n = l.rows();
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  return y;
}

Vec backward_solve_transposed(const Matrix& l, const Vec& rhs) {
  const std::size_t n = l.rows();
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

Vec cholesky_solve(const Matrix& l, const Vec& rhs) {
  return backward_solve_transposed(l, forward_solve(l, rhs));
}

Vec DenseCholesky::solve(const Vec& rhs) const { return cholesky_solve(l_, rhs); }

}  // namespace lumplab
