#pragma once

#include <cstdint>

#include "lumplab/matrix.hpp"

namespace lumplab {

/// Symmetric positive-definite banded matrix in packed storage. The band
/// `bands()[d][i]` holds entry (i, i+d) for offsets d = 0..bandwidth; entries
/// outside the band are structurally zero.
class BandedSPD {
public:
  BandedSPD(std::size_t n, std::size_t bandwidth);

  /// Extracts the band of a dense symmetric matrix. Entries outside the band
  /// must be exactly zero unless `allow_truncation` is set.
  static BandedSPD from_dense(const SymMatrix& a, std::size_t bandwidth,
                              bool allow_truncation = false);

  std::size_t dim() const { return n_; }
  std::size_t bandwidth() const { return bw_; }

  double at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double v);

  SymMatrix dense() const;
  Vec apply(const Vec& x) const;

  const std::vector<Vec>& bands() const { return bands_; }

private:
  std::size_t n_, bw_;
  std::vector<Vec> bands_;
};

/// Banded Cholesky factorization (lower factor, same bandwidth). Counts the
/// floating point operations spent in factorization and solves so tests can
/// pin the O(n b^2) claim.
class BandedCholesky {
public:
  explicit BandedCholesky(const BandedSPD& a);  ///< throws NotPositiveDefinite
  Vec solve(const Vec& rhs) const;
  std::uint64_t flops() const { return flops_; }

private:
  std::size_t n_, bw_;
  std::vector<Vec> l_;  // l_[d][i] = L(i+d, i)
  mutable std::uint64_t flops_ = 0;
};

Vec banded_cholesky_solve(const BandedSPD& a, const Vec& rhs, std::uint64_t* flops = nullptr);

/// Thomas elimination for tridiagonal SPD systems, O(n).
Vec thomas_solve(const BandedSPD& a, const Vec& rhs, std::uint64_t* flops = nullptr);

}  // namespace lumplab
