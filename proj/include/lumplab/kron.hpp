#pragma once

#include "lumplab/matrix.hpp"

namespace lumplab {

struct KronTerm {
  double weight = 1.0;             ///< sigma_i >= 0
  std::vector<SymMatrix> factors;  ///< 2 or 3 square factors
};

/// Weighted sum of Kronecker products, sum_i sigma_i (U_i x V_i [x W_i]).
/// All terms share the same factor dimensions; the flattened index convention
/// is column-major stacking: global (i1, i2[, i3]) maps to (i1*n2 + i2)[*n3 + i3].
class KronOperator {
public:
  KronOperator() = default;
  explicit KronOperator(std::vector<KronTerm> terms);  ///< sorts terms by weight, validates

  static KronOperator single(std::vector<SymMatrix> factors, double weight = 1.0);

  const std::vector<KronTerm>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t total_dim() const;

  /// Dense expansion. Throws if total_dim() exceeds `cap`.
  SymMatrix materialize(std::size_t cap = kDefaultMaterializeCap) const;

  /// Solves (U x V [x W]) x = rhs for a single-term operator with SPD factors,
  /// using one banded Cholesky solve per factor direction.
  Vec solve(const Vec& rhs) const;

  Vec apply(const Vec& x) const;

  static constexpr std::size_t kDefaultMaterializeCap = 4096;

private:
  std::vector<KronTerm> terms_;
  std::vector<std::size_t> dims_;
};

SymMatrix kron_materialize(const KronOperator& op,
                           std::size_t cap = KronOperator::kDefaultMaterializeCap);
Vec kron_solve(const KronOperator& op, const Vec& rhs);

/// Dense Kronecker product of two symmetric matrices (column-major stacking).
SymMatrix kron_product(const SymMatrix& a, const SymMatrix& b);

}  // namespace lumplab
