#include "lumplab/banded.hpp"

#include <cmath>

namespace lumplab {

BandedSPD::BandedSPD(std::size_t n, std::size_t bandwidth) : n_(n), bw_(bandwidth) {
  if (n == 0) throw DimensionMismatch("BandedSPD requires n >= 1");
  if (bw_ >= n_) bw_ = n_ - 1;
  bands_.resize(bw_ + 1);
  for (std::size_t d = 0; d <= bw_; ++d) bands_[d].assign(n_ - d, 0.0);
}

BandedSPD BandedSPD::from_dense(const SymMatrix& a, std::size_t bandwidth, bool allow_truncation) {
  BandedSPD b(a.dim(), bandwidth);
  for (std::size_t d = 0; d <= b.bw_; ++d)
    for (std::size_t i = 0; i + d < a.dim(); ++i) b.bands_[d][i] = a(i, i + d);
  if (!allow_truncation) {
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = i + b.bw_ + 1; j < a.dim(); ++j)
        if (a(i, j) != 0.0)
          throw DimensionMismatch("dense matrix has entries outside the declared band");
  }
  return b;
}

double BandedSPD::at(std::size_t i, std::size_t j) const {
  const std::size_t lo = std::min(i, j), hi = std::max(i, j);
  const std::size_t d = hi - lo;
  return d <= bw_ ? bands_[d][lo] : 0.0;
}

void BandedSPD::set(std::size_t i, std::size_t j, double v) {
  const std::size_t lo = std::min(i, j), hi = std::max(i, j);
  const std::size_t d = hi - lo;
  if (d > bw_) throw DimensionMismatch("BandedSPD::set outside band");
  bands_[d][lo] = v;
}

SymMatrix BandedSPD::dense() const {
  SymMatrix a(n_);
  for (std::size_t d = 0; d <= bw_; ++d)
    for (std::size_t i = 0; i + d < n_; ++i) a.set(i, i + d, bands_[d][i]);
  return a;
}

Vec BandedSPD::apply(const Vec& x) const {
  if (x.size() != n_) throw DimensionMismatch("BandedSPD::apply dimension mismatch");
  Vec y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) y[i] = bands_[0][i] * x[i];
  for (std::size_t d = 1; d <= bw_; ++d)
    for (std::size_t i = 0; i + d < n_; ++i) {
      y[i] += bands_[d][i] * x[i + d];
      y[i + d] += bands_[d][i] * x[i];
    }
  return y;
}

BandedCholesky::BandedCholesky(const BandedSPD& a) : n_(a.dim()), bw_(a.bandwidth()) {
  l_.resize(bw_ + 1);
  for (std::size_t d = 0; d <= bw_; ++d) l_[d].assign(n_ - d, 0.0);

  // Column-oriented banded Cholesky: only entries within the band are touched.
  for (std::size_t j = 0; j < n_; ++j) {
    double d = a.at(j, j);
    const std::size_t k0 = j > bw_ ? j - bw_ : 0;
    for (std::size_t k = k0; k < j; ++k) {
      const double ljk = l_[j - k][k];
      d -= ljk * ljk;
      flops_ += 2;
    }
    if (!(d > 0.0)) throw NotPositiveDefinite("banded Cholesky failed", j);
    const double ljj = std::sqrt(d);
    l_[0][j] = ljj;
    ++flops_;
    for (std::size_t i = j + 1; i < std::min(j + bw_ + 1, n_); ++i) {
      double s = a.at(i, j);
      const std::size_t kk0 = i > bw_ ? i - bw_ : 0;
      for (std::size_t k = std::max(k0, kk0); k < j; ++k) {
        s -= l_[i - k][k] * l_[j - k][k];
        flops_ += 2;
      }
      l_[i - j][j] = s / ljj;
      ++flops_;
    }
  }
}

Vec BandedCholesky::solve(const Vec& rhs) const {
  if (rhs.size() != n_) throw DimensionMismatch("BandedCholesky::solve dimension mismatch");
  Vec y(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = rhs[i];
    const std::size_t k0 = i > bw_ ? i - bw_ : 0;
    for (std::size_t k = k0; k < i; ++k) {
      s -= l_[i - k][k] * y[k];
      flops_ += 2;
    }
    y[i] = s / l_[0][i];
    ++flops_;
  }
  Vec x(n_);
  for (std::size_t i = n_; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < std::min(i + bw_ + 1, n_); ++k) {
      s -= l_[k - i][i] * x[k];
      flops_ += 2;
    }
    x[i] = s / l_[0][i];
    ++flops_;
  }
  return x;
}

Vec banded_cholesky_solve(const BandedSPD& a, const Vec& rhs, std::uint64_t* flops) {
  BandedCholesky fac(a);
  Vec x = fac.solve(rhs);
  if (flops) *flops = fac.flops();
  return x;
}

Vec thomas_solve(const BandedSPD& a, const Vec& rhs, std::uint64_t* flops) {
  if (a.bandwidth() > 1) throw DimensionMismatch("thomas_solve requires a tridiagonal matrix");
  const std::size_t n = a.dim();
  if (rhs.size() != n) throw DimensionMismatch("thomas_solve dimension mismatch");
  std::uint64_t count = 0;

  Vec diag(n), upper(n > 1 ? n - 1 : 0), d(rhs);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a.at(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) upper[i] = a.at(i, i + 1);

  for (std::size_t i = 1; i < n; ++i) {
    if (!(diag[i - 1] > 0.0)) throw NotPositiveDefinite("Thomas elimination failed", i - 1);
    const double w = upper[i - 1] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    d[i] -= w * d[i - 1];
    count += 5;
  }
  if (!(diag[n - 1] > 0.0)) throw NotPositiveDefinite("Thomas elimination failed", n - 1);

  Vec x(n);
  x[n - 1] = d[n - 1] / diag[n - 1];
  ++count;
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = (d[i] - upper[i] * x[i + 1]) / diag[i];
    count += 3;
  }
  if (flops) *flops = count;
  return x;
}

}  // namespace lumplab
