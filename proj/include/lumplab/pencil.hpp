#pragma once

#include <string>

#include "lumplab/eig.hpp"
#include "lumplab/mass_operator.hpp"

namespace lumplab {

/// Symmetric matrix pair (A, B). All generalized eigenvalues are real when B
/// is positive definite.
struct Pencil {
  SymMatrix A;
  SymMatrix B;
  bool B_definite = false;

  static Pencil make(SymMatrix a, SymMatrix b);
};

struct GenEigResult {
  Vec values;      ///< ascending
  Matrix vectors;  ///< B-orthonormal, column k belongs to values[k]
};

/// Generalized symmetric-definite eigensolver: reduces (A, B) with B = L L^T
/// to the standard problem for L^{-1} A L^{-T}. Throws NotPositiveDefinite if
/// B fails Cholesky, and SingularPencilError if in addition A and B share a
/// near-null vector.
GenEigResult gen_eig(const Pencil& p, double tol = 1e-12);
GenEigResult gen_eig(const SymMatrix& a, const SymMatrix& b, double tol = 1e-12);
Vec gen_eig_values(const SymMatrix& a, const SymMatrix& b, double tol = 1e-12);

/// True when A and B share a near-null vector, i.e. the smallest eigenvalue
/// of A^2 + B^2 is below tol times its scale.
bool is_singular_pencil(const SymMatrix& a, const SymMatrix& b, double tol = 1e-12);

enum class LoewnerOrder {
  equal,             ///< ||X - Y||_F negligible
  first_dominates,   ///< X - Y positive semidefinite
  second_dominates,  ///< Y - X positive semidefinite
  indefinite         ///< X - Y has eigenvalues of both signs
};

LoewnerOrder loewner_compare(const SymMatrix& x, const SymMatrix& y, double tol = 1e-10);

struct BoundRow {
  std::size_t k;           ///< eigenvalue index, 1-based
  double attained;         ///< the quantity the bound constrains
  double lower;
  double upper;
  std::string bound_name;
};

struct BoundReport {
  std::vector<BoundRow> rows;

  bool all_hold(double tol = 1e-10) const;
  std::string to_csv() const;   ///< columns: k, lambda, lower, upper, bound_name
  std::string to_json() const;
};

/// Both multiplicative eigenvalue chains for SPD (A, B, C):
///   lambda_k(A,C) lambda_1(C,B) <= lambda_k(A,B) <= lambda_k(A,C) lambda_n(C,B)
///   lambda_1(A,C) lambda_k(C,B) <= lambda_k(A,B) <= lambda_n(A,C) lambda_k(C,B)
BoundReport sandwich_bounds(const SymMatrix& a, const SymMatrix& b, const SymMatrix& c);

/// Per-k ratio lambda_k(K,Mt)/lambda_k(K,M) with its envelope
/// [lambda_1(M,Mt), lambda_n(M,Mt)].
BoundReport ratio_bounds(const SymMatrix& k_mat, const SymMatrix& m, const SymMatrix& mt);

/// Residual-type perturbation bounds for (A,B) vs (A+E, B+F), reported per
/// eigenvalue, plus the uniform Crawford bound.
BoundReport bauer_fike_bounds(const Pencil& p, const Pencil& pt);

/// theta_i = arccot(lambda_i), monotone decreasing in lambda, range (0, pi).
Vec eigenangles(const Vec& values);

/// Largest stable central-difference step, 2 / sqrt(lambda_n(K, M)).
double critical_dt(const SymMatrix& k_mat, const SymMatrix& m_like);
double critical_dt(const SymMatrix& k_mat, const MassOperator& m_like);

}  // namespace lumplab
