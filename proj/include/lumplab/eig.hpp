#pragma once

#include "lumplab/matrix.hpp"

namespace lumplab {

struct EigResult {
  Vec values;            ///< ascending
  Matrix vectors;        ///< column k is the eigenvector of values[k]
  double orthogonality;  ///< ||V^T V - I||_F, diagnostic
};

/// Symmetric eigendecomposition. Cyclic Jacobi up to n = 64, Householder
/// tridiagonalization plus implicit-shift QL above that.
EigResult sym_eig(const SymMatrix& a, double tol = 1e-12);

struct SvdResult {
  Vec singular_values;  ///< non-increasing, >= 0
  Matrix left;          ///< m x r columns u_i
  Matrix right;         ///< n x r columns v_i
};

/// One-sided Jacobi SVD of a general rectangular matrix.
SvdResult svd(const Matrix& a, double tol = 1e-12);

/// Lower-triangular L with L L^T = A. Throws NotPositiveDefinite.
Matrix cholesky(const SymMatrix& a);

class DenseCholesky {
public:
  explicit DenseCholesky(const SymMatrix& a) : l_(cholesky(a)) {}
  Vec solve(const Vec& rhs) const;
  const Matrix& factor() const { return l_; }

private:
  Matrix l_;
};

/// Solves L y = b (forward) then L^T x = y (backward).
Vec cholesky_solve(const Matrix& l, const Vec& rhs);
Vec forward_solve(const Matrix& l, const Vec& rhs);
Vec backward_solve_transposed(const Matrix& l, const Vec& rhs);

}  // namespace lumplab
