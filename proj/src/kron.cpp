#include "lumplab/kron.hpp"

#include <algorithm>
#include <cmath>

#include "lumplab/banded.hpp"

namespace lumplab {

namespace {

std::size_t detect_bandwidth(const SymMatrix& a) {
  std::size_t bw = 0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i + 1; j < a.dim(); ++j)
      if (a(i, j) != 0.0) bw = std::max(bw, j - i);
  return bw;
}

}  // namespace

KronOperator::KronOperator(std::vector<KronTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw DimensionMismatch("KronOperator requires at least one term");
  for (const auto& t : terms_) {
    if (t.factors.size() != 2 && t.factors.size() != 3)
      throw DimensionMismatch("KronOperator terms need 2 or 3 factors");
    if (t.weight < 0.0) throw std::invalid_argument("KronOperator weights must be >= 0");
  }
  dims_.clear();
  for (const auto& f : terms_.front().factors) dims_.push_back(f.dim());
  for (const auto& t : terms_) {
    if (t.factors.size() != dims_.size())
      throw DimensionMismatch("KronOperator terms have inconsistent factor counts");
    for (std::size_t d = 0; d < dims_.size(); ++d)
      if (t.factors[d].dim() != dims_[d])
        throw DimensionMismatch("KronOperator terms have inconsistent factor dimensions");
  }
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const KronTerm& a, const KronTerm& b) { return a.weight > b.weight; });
}

KronOperator KronOperator::single(std::vector<SymMatrix> factors, double weight) {
  KronTerm t;
  t.weight = weight;
  t.factors = std::move(factors);
  return KronOperator({std::move(t)});
}

std::size_t KronOperator::total_dim() const {
  std::size_t n = 1;
  for (std::size_t d : dims_) n *= d;
  return n;
}

SymMatrix KronOperator::materialize(std::size_t cap) const {
  const std::size_t n = total_dim();
  if (n > cap) throw DimensionMismatch("kron_materialize dimension cap exceeded");
  SymMatrix out(n);
  for (const auto& t : terms_) {
    if (dims_.size() == 2) {
      const SymMatrix& u = t.factors[0];
      const SymMatrix& v = t.factors[1];
      const std::size_t n1 = u.dim(), n2 = v.dim();
      for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
          for (std::size_t j1 = 0; j1 < n1; ++j1)
            for (std::size_t j2 = 0; j2 < n2; ++j2) {
              const std::size_t r = i1 * n2 + i2, c = j1 * n2 + j2;
              if (c < r) continue;
              out.set(r, c, out(r, c) + t.weight * u(i1, j1) * v(i2, j2));
            }
    } else {
      const SymMatrix& u = t.factors[0];
      const SymMatrix& v = t.factors[1];
      const SymMatrix& w = t.factors[2];
      const std::size_t n1 = u.dim(), n2 = v.dim(), n3 = w.dim();
      for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
          for (std::size_t i3 = 0; i3 < n3; ++i3)
            for (std::size_t j1 = 0; j1 < n1; ++j1)
              for (std::size_t j2 = 0; j2 < n2; ++j2)
                for (std::size_t j3 = 0; j3 < n3; ++j3) {
                  const std::size_t r = (i1 * n2 + i2) * n3 + i3;
                  const std::size_t c = (j1 * n2 + j2) * n3 + j3;
                  if (c < r) continue;
                  out.set(r, c, out(r, c) + t.weight * u(i1, j1) * v(i2, j2) * w(i3, j3));
                }
    }
  }
  return out;
}

Vec KronOperator::solve(const Vec& rhs) const {
  if (terms_.size() != 1)
    throw DimensionMismatch("kron_solve requires a single-term operator");
  const KronTerm& t = terms_.front();
  if (!(t.weight > 0.0)) throw NotPositiveDefinite("kron_solve with non-positive weight", 0);
  const std::size_t n = total_dim();
  if (rhs.size() != n) throw DimensionMismatch("kron_solve dimension mismatch");

  // Factor solves along each tensor mode; banded factorization keeps the
  // per-direction cost at O(n_d b_d^2).
  Vec x = rhs;
  std::size_t left = 1;
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const std::size_t nd = dims_[d];
    std::size_t right = 1;
    for (std::size_t e = d + 1; e < dims_.size(); ++e) right *= dims_[e];
    const SymMatrix& f = t.factors[d];
    BandedCholesky fac(BandedSPD::from_dense(f, detect_bandwidth(f)));
    Vec fiber(nd);
    for (std::size_t l = 0; l < left; ++l)
      for (std::size_t r = 0; r < right; ++r) {
        for (std::size_t k = 0; k < nd; ++k) fiber[k] = x[(l * nd + k) * right + r];
        Vec sol = fac.solve(fiber);
        for (std::size_t k = 0; k < nd; ++k) x[(l * nd + k) * right + r] = sol[k];
      }
    left *= nd;
  }
  for (double& v : x) v /= t.weight;
  return x;
}

Vec KronOperator::apply(const Vec& x) const {
  const std::size_t n = total_dim();
  if (x.size() != n) throw DimensionMismatch("KronOperator::apply dimension mismatch");
  Vec out(n, 0.0);
  for (const auto& t : terms_) {
    Vec y = x;
    std::size_t left = 1;
    for (std::size_t d = 0; d < dims_.size(); ++d) {
      const std::size_t nd = dims_[d];
      std::size_t right = 1;
      for (std::size_t e = d + 1; e < dims_.size(); ++e) right *= dims_[e];
      const SymMatrix& f = t.factors[d];
      Vec fiber(nd), res(nd);
      for (std::size_t l = 0; l < left; ++l)
        for (std::size_t r = 0; r < right; ++r) {
          for (std::size_t k = 0; k < nd; ++k) fiber[k] = y[(l * nd + k) * right + r];
          res = f.apply(fiber);
          for (std::size_t k = 0; k < nd; ++k) y[(l * nd + k) * right + r] = res[k];
        }
      left *= nd;
    }
    axpy(t.weight, y, out);
  }
  return out;
}

SymMatrix kron_materialize(const KronOperator& op, std::size_t cap) { return op.materialize(cap); }

Vec kron_solve(const KronOperator& op, const Vec& rhs) { return op.solve(rhs); }

SymMatrix kron_product(const SymMatrix& a, const SymMatrix& b) {
  const std::size_t n1 = a.dim(), n2 = b.dim();
  SymMatrix out(n1 * n2);
  for (std::size_t i1 = 0; i1 < n1; ++i1)
    for (std::size_t i2 = 0; i2 < n2; ++i2)
      for (std::size_t j1 = 0; j1 < n1; ++j1)
        for (std::size_t j2 = 0; j2 < n2; ++j2) {
          const std::size_t r = i1 * n2 + i2, c = j1 * n2 + j2;
          if (c < r) continue;
          out.set(r, c, a(i1, j1) * b(i2, j2));
        }
  return out;
}

}  // namespace lumplab
