#pragma once

#include <memory>
#include <string>

#include "lumplab/banded.hpp"
#include "lumplab/eig.hpp"
#include "lumplab/kron.hpp"

namespace lumplab {

/// Solver-capable stand-in for the mass matrix: dense SPD, banded SPD, or a
/// single-term Kronecker product. Factorizations happen once at construction.
class MassOperator {
public:
  static MassOperator dense(SymMatrix m, std::string label = "M");
  static MassOperator banded(BandedSPD m, std::string label = "P");
  static MassOperator kron(KronOperator m, std::string label = "P_kron");

  std::size_t dim() const;
  Vec solve(const Vec& rhs) const;
  SymMatrix dense_matrix() const;  ///< materialization for spectrum work
  const std::string& label() const { return label_; }

private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  std::string label_;
};

}  // namespace lumplab
