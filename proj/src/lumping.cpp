#include "lumplab/lumping.hpp"

#include <cmath>

namespace lumplab {

Vec lump_diagonal(const SymMatrix& b) {
  const std::size_t n = b.dim();
  Vec d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::fabs(b(i, j));
    d[i] = s;
  }
  return d;
}

SymMatrix lump(const SymMatrix& b) { return SymMatrix::diagonal(lump_diagonal(b)); }

BandSplit band_split(const SymMatrix& b, std::size_t i) {
  const std::size_t n = b.dim();
  if (i < 1 || i > n) throw DimensionMismatch("band_split index out of range");
  BandSplit s{i, SymMatrix(n), SymMatrix(n)};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      if (c - r < i)
        s.inner.set(r, c, b(r, c));
      else
        s.remainder.set(r, c, b(r, c));
    }
  return s;
}

LumpedFamilyMember make_Pi(const SymMatrix& b, std::size_t i) {
  const std::size_t n = b.dim();
  if (i < 1 || i > n) throw DimensionMismatch("make_Pi index out of range");
  BandedSPD p(n, i - 1);
  for (std::size_t r = 0; r < n; ++r) {
    double lumped = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t off = r > c ? r - c : c - r;
      if (off >= i) lumped += std::fabs(b(r, c));
    }
    p.set(r, r, b(r, r) + lumped);
    for (std::size_t c = r + 1; c < std::min(r + i, n); ++c) p.set(r, c, b(r, c));
  }
  try {
    BandedCholesky check(p);
  } catch (const NotPositiveDefinite&) {
    // cannot happen for SPD input; P_i inherits definiteness from B
    throw std::logic_error("make_Pi produced a non-SPD member from an SPD source");
  }
  return {i, std::move(p)};
}

KronOperator make_Pij(const std::vector<SymMatrix>& factors,
                      const std::vector<std::size_t>& indices) {
  if (factors.size() != indices.size())
    throw DimensionMismatch("make_Pij needs one band index per factor");
  if (factors.size() != 2 && factors.size() != 3)
    throw DimensionMismatch("make_Pij expects 2 or 3 factors");
  std::vector<SymMatrix> members;
  members.reserve(factors.size());
  for (std::size_t d = 0; d < factors.size(); ++d)
    members.push_back(make_Pi(factors[d], indices[d]).matrix.dense());
  return KronOperator::single(std::move(members));
}

KronOperator vector_pde_wrap(const SymMatrix& p, std::size_t d) {
  if (d != 2 && d != 3) throw DimensionMismatch("vector_pde_wrap expects d in {2, 3}");
  return KronOperator::single({SymMatrix::identity(d), p});
}

}  // namespace lumplab
