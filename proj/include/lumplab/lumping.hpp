#pragma once

#include "lumplab/banded.hpp"
#include "lumplab/kron.hpp"

namespace lumplab {

/// Row-sum lumping: diagonal d_i = sum_j |b_ij|. SPD iff B has no zero row.
SymMatrix lump(const SymMatrix& b);
Vec lump_diagonal(const SymMatrix& b);

/// Splitting B = D_i + R_i where D_i keeps all super/sub-diagonals with
/// offset < i and R_i is the remainder.
struct BandSplit {
  std::size_t index;    ///< i, 1-based
  SymMatrix inner;      ///< D_i
  SymMatrix remainder;  ///< R_i
};

BandSplit band_split(const SymMatrix& b, std::size_t i);

/// P_i = D_i + L(R_i), stored packed with bandwidth i-1. P_1 = L(B), P_n = B.
struct LumpedFamilyMember {
  std::size_t index;
  BandedSPD matrix;
};

LumpedFamilyMember make_Pi(const SymMatrix& b, std::size_t i);

/// Kronecker family P_ij = P_{1,i} x P_{2,j} (optionally x P_{3,k}) built from
/// per-direction SPD factors.
KronOperator make_Pij(const std::vector<SymMatrix>& factors,
                      const std::vector<std::size_t>& indices);

/// Vector-PDE extension I_d x P; solves apply P's solve per block.
KronOperator vector_pde_wrap(const SymMatrix& p, std::size_t d);

}  // namespace lumplab
