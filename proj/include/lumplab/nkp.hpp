#pragma once

#include <functional>

#include "lumplab/assemble.hpp"
#include "lumplab/kron.hpp"

namespace lumplab {

/// Rearranged matrix R(M): for block dims (n1, n2), row i*n1 + j holds
/// vec(A_{j,i})^T where A_{j,i} is the (j,i) block of M and vec stacks
/// column-major. Isometric in the Frobenius norm.
struct Rearranged {
  std::size_t n1 = 0, n2 = 0;
  Matrix matrix;  ///< n1^2 x n2^2
  std::vector<std::size_t> nonzero_rows;
  std::vector<std::size_t> nonzero_cols;
};

Rearranged rearrange(const SymMatrix& m, std::size_t n1, std::size_t n2);
SymMatrix unrearrange(const Matrix& r, std::size_t n1, std::size_t n2);

/// Threshold defining the numerical Kronecker rank: count of
/// sigma_i > kRankTol * sigma_1.
inline constexpr double kRankTol = 1e-14;

struct NkpResult {
  std::vector<SymMatrix> factors;  ///< B, C [, D]
  Vec singular_values;             ///< of the dense nonzero block (2D)
  Vec convergence_history;         ///< per-sweep residuals (3D)
  double truncation_error = 0.0;   ///< ||M - approx||_F
  std::size_t kronecker_rank = 0;
  bool converged = true;  ///< 3D power iteration hit its tolerance
};

/// Nearest Kronecker product: B = sqrt(sigma_1) reshape(u_1),
/// C = sqrt(sigma_1) reshape(v_1), signs fixed so trace(B) >= 0.
NkpResult nkp_rank1(const SymMatrix& m, std::size_t n1, std::size_t n2);

/// Rank-r truncation as a weighted KronOperator, weights sigma_i.
KronOperator nkp_rank_r(const SymMatrix& m, std::size_t n1, std::size_t n2, std::size_t r);

/// 3D rank-1 approximation of the rearranged third-order tensor: truncated
/// HOSVD initialization followed by higher-order power iteration.
NkpResult nkp_rank1_3d(const SymMatrix& m, std::size_t n1, std::size_t n2, std::size_t n3);

struct CondBound {
  double delta = 0.0;
  bool applicable = false;  ///< delta < 1
  double bound = 0.0;       ///< (1 + delta) / (1 - delta) when applicable
  double kappa = 0.0;       ///< attained lambda_n(M, Mt) / lambda_1(M, Mt)
};

/// Condition-number bound for the rank-1 truncation of a Kronecker-rank-r
/// operator: delta = sum_{i>=2} (s_i/s_1) max_k|l_k(U_i,U_1)| max_k|l_k(V_i,V_1)|.
CondBound cond_bound(const KronOperator& m_op);

/// lhs = sum_i (lambda_i(M) - lambda_i(Mt))^2 and rhs = ||Mt - M||_F^2.
std::pair<double, double> hoffman_wielandt_check(const SymMatrix& m, const SymMatrix& mt);

struct EquivalenceRow {
  double h = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool definite = true;  ///< NKP approximation passed Cholesky
};

/// Extreme eigenvalues of (M, Mt) per mesh for a fixed-rank NKP substitute.
std::vector<EquivalenceRow> spectral_equivalence_scan(
    const std::function<DiscreteModel(int)>& make_model, const std::vector<int>& meshes,
    std::size_t rank = 1);

}  // namespace lumplab
