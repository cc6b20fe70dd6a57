#include "lumplab/nkp.hpp"

#include <cmath>

#include "lumplab/eig.hpp"
#include "lumplab/pencil.hpp"

namespace lumplab {

namespace {

double trace_of(const SymMatrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
  return t;
}

/// Column-major reshape of a length-n^2 vector into a symmetrized n x n matrix.
SymMatrix reshape_symmetrized(const Vec& v, std::size_t n) {
  Matrix m(n, n);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t row = 0; row < n; ++row) m(row, col) = v[col * n + row];
  return SymMatrix::from_general(m);
}

struct BlockSvd {
  Vec sigma;                       ///< all singular values (padded dimension)
  std::vector<Vec> left;           ///< embedded u_i of length n1^2
  std::vector<Vec> right;          ///< embedded v_i of length n2^2
  std::size_t positive_rank = 0;   ///< count of sigma_i > 0
};

/// SVD of the dense nonzero block of R(M), singular vectors embedded back
/// into the full index sets.
BlockSvd block_svd(const Rearranged& r) {
  BlockSvd out;
  const std::size_t nr = r.nonzero_rows.size(), nc = r.nonzero_cols.size();
  if (nr == 0 || nc == 0) {
    out.sigma.assign(1, 0.0);
    out.left.assign(1, Vec(r.n1 * r.n1, 0.0));
    out.right.assign(1, Vec(r.n2 * r.n2, 0.0));
    return out;
  }
  Matrix block(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) block(i, j) = r.matrix(r.nonzero_rows[i], r.nonzero_cols[j]);
  SvdResult s = svd(block);
  const std::size_t k = s.singular_values.size();
  out.sigma = s.singular_values;
  out.left.resize(k, Vec(r.n1 * r.n1, 0.0));
  out.right.resize(k, Vec(r.n2 * r.n2, 0.0));
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t i = 0; i < nr; ++i) out.left[t][r.nonzero_rows[i]] = s.left(i, t);
    for (std::size_t j = 0; j < nc; ++j) out.right[t][r.nonzero_cols[j]] = s.right(j, t);
    if (out.sigma[t] > 0.0) out.positive_rank = t + 1;
  }
  return out;
}

double tail_error(const Vec& sigma, std::size_t r) {
  double s2 = 0.0;
  for (std::size_t i = r; i < sigma.size(); ++i) s2 += sigma[i] * sigma[i];
  return std::sqrt(s2);
}

std::size_t numerical_rank(const Vec& sigma) {
  if (sigma.empty() || sigma[0] <= 0.0) return 0;
  std::size_t r = 0;
  for (double s : sigma)
    if (s > kRankTol * sigma[0]) ++r;
  return r;
}

}  // namespace

Rearranged rearrange(const SymMatrix& m, std::size_t n1, std::size_t n2) {
  if (m.dim() != n1 * n2) throw DimensionMismatch("rearrange: dim(M) != n1 * n2");
  Rearranged r;
  r.n1 = n1;
  r.n2 = n2;
  r.matrix = Matrix(n1 * n1, n2 * n2);
  for (std::size_t i = 0; i < n1; ++i)        // block column
    for (std::size_t j = 0; j < n1; ++j) {    // block row
      const std::size_t row = i * n1 + j;
      for (std::size_t b = 0; b < n2; ++b)
        for (std::size_t a = 0; a < n2; ++a)
          r.matrix(row, b * n2 + a) = m(j * n2 + a, i * n2 + b);
    }
  for (std::size_t i = 0; i < r.matrix.rows(); ++i)
    for (std::size_t j = 0; j < r.matrix.cols(); ++j)
      if (r.matrix(i, j) != 0.0) {
        r.nonzero_rows.push_back(i);
        break;
      }
  for (std::size_t j = 0; j < r.matrix.cols(); ++j)
    for (std::size_t i = 0; i < r.matrix.rows(); ++i)
      if (r.matrix(i, j) != 0.0) {
        r.nonzero_cols.push_back(j);
        break;
      }
  return r;
}

SymMatrix unrearrange(const Matrix& r, std::size_t n1, std::size_t n2) {
  if (r.rows() != n1 * n1 || r.cols() != n2 * n2)
    throw DimensionMismatch("unrearrange: shape mismatch");
  Matrix m(n1 * n2, n1 * n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t b = 0; b < n2; ++b)
        for (std::size_t a = 0; a < n2; ++a)
          m(j * n2 + a, i * n2 + b) = r(i * n1 + j, b * n2 + a);
  return SymMatrix::from_general(m);
}

NkpResult nkp_rank1(const SymMatrix& m, std::size_t n1, std::size_t n2) {
  Rearranged r = rearrange(m, n1, n2);
  BlockSvd s = block_svd(r);
  NkpResult out;
  out.singular_values = s.sigma;
  out.kronecker_rank = numerical_rank(s.sigma);
  out.truncation_error = tail_error(s.sigma, 1);

  Vec u = s.left[0], v = s.right[0];
  SymMatrix bu = reshape_symmetrized(u, n1);
  if (trace_of(bu) < 0.0) {
    for (double& x : u) x = -x;
    for (double& x : v) x = -x;
    bu = reshape_symmetrized(u, n1);
  }
  const double scale = std::sqrt(s.sigma[0]);
  out.factors.push_back(scale * bu);
  out.factors.push_back(scale * reshape_symmetrized(v, n2));
  return out;
}

KronOperator nkp_rank_r(const SymMatrix& m, std::size_t n1, std::size_t n2, std::size_t r) {
  Rearranged re = rearrange(m, n1, n2);
  BlockSvd s = block_svd(re);
  if (r < 1 || r > s.positive_rank)
    throw DimensionMismatch("nkp_rank_r: requested rank exceeds the rank of the nonzero block");
  std::vector<KronTerm> terms;
  terms.reserve(r);
  for (std::size_t t = 0; t < r; ++t) {
    Vec u = s.left[t], v = s.right[t];
    SymMatrix bu = reshape_symmetrized(u, n1);
    if (trace_of(bu) < 0.0) {
      for (double& x : u) x = -x;
      for (double& x : v) x = -x;
      bu = reshape_symmetrized(u, n1);
    }
    terms.push_back(KronTerm{s.sigma[t], {bu, reshape_symmetrized(v, n2)}});
  }
  return KronOperator(std::move(terms));
}

namespace {

/// Third-order rearrangement tensor stored flat: t[(a*d2 + b)*d3 + c] with
/// a, b, c indexing the column-major vectorizations of the three factors.
struct Tensor3 {
  std::size_t d1, d2, d3;
  Vec data;
  double& at(std::size_t a, std::size_t b, std::size_t c) { return data[(a * d2 + b) * d3 + c]; }
  double at(std::size_t a, std::size_t b, std::size_t c) const {
    return data[(a * d2 + b) * d3 + c];
  }
  double norm() const {
    double s = 0.0;
    for (double v : data) s += v * v;
    return std::sqrt(s);
  }
};

Tensor3 rearrange_3d(const SymMatrix& m, std::size_t n1, std::size_t n2, std::size_t n3) {
  Tensor3 t{n1 * n1, n2 * n2, n3 * n3, Vec(n1 * n1 * n2 * n2 * n3 * n3, 0.0)};
  for (std::size_t i1 = 0; i1 < n1; ++i1)
    for (std::size_t j1 = 0; j1 < n1; ++j1)
      for (std::size_t i2 = 0; i2 < n2; ++i2)
        for (std::size_t j2 = 0; j2 < n2; ++j2)
          for (std::size_t i3 = 0; i3 < n3; ++i3)
            for (std::size_t j3 = 0; j3 < n3; ++j3)
              t.at(i1 * n1 + j1, i2 * n2 + j2, i3 * n3 + j3) =
                  m((j1 * n2 + j2) * n3 + j3, (i1 * n2 + i2) * n3 + i3);
  return t;
}

/// Contractions of T with unit vectors along two modes.
Vec contract_23(const Tensor3& t, const Vec& v, const Vec& w) {
  Vec out(t.d1, 0.0);
  for (std::size_t a = 0; a < t.d1; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < t.d2; ++b)
      for (std::size_t c = 0; c < t.d3; ++c) s += t.at(a, b, c) * v[b] * w[c];
    out[a] = s;
  }
  return out;
}

Vec contract_13(const Tensor3& t, const Vec& u, const Vec& w) {
  Vec out(t.d2, 0.0);
  for (std::size_t b = 0; b < t.d2; ++b) {
    double s = 0.0;
    for (std::size_t a = 0; a < t.d1; ++a)
      for (std::size_t c = 0; c < t.d3; ++c) s += t.at(a, b, c) * u[a] * w[c];
    out[b] = s;
  }
  return out;
}

Vec contract_12(const Tensor3& t, const Vec& u, const Vec& v) {
  Vec out(t.d3, 0.0);
  for (std::size_t c = 0; c < t.d3; ++c) {
    double s = 0.0;
    for (std::size_t a = 0; a < t.d1; ++a)
      for (std::size_t b = 0; b < t.d2; ++b) s += t.at(a, b, c) * u[a] * v[b];
    out[c] = s;
  }
  return out;
}

/// Leading left singular vector of the mode-d unfolding via the Gram matrix.
Vec leading_mode_vector(const Tensor3& t, int mode) {
  const std::size_t n = mode == 1 ? t.d1 : mode == 2 ? t.d2 : t.d3;
  SymMatrix gram(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      if (mode == 1) {
        for (std::size_t b = 0; b < t.d2; ++b)
          for (std::size_t c = 0; c < t.d3; ++c) s += t.at(i, b, c) * t.at(j, b, c);
      } else if (mode == 2) {
        for (std::size_t a = 0; a < t.d1; ++a)
          for (std::size_t c = 0; c < t.d3; ++c) s += t.at(a, i, c) * t.at(a, j, c);
      } else {
        for (std::size_t a = 0; a < t.d1; ++a)
          for (std::size_t b = 0; b < t.d2; ++b) s += t.at(a, b, i) * t.at(a, b, j);
      }
      gram.set(i, j, s);
    }
  auto eg = sym_eig(gram);
  return eg.vectors.column(n - 1);
}

void normalize(Vec& v) {
  const double n = norm2(v);
  if (n > 0.0)
    for (double& x : v) x /= n;
}

}  // namespace

NkpResult nkp_rank1_3d(const SymMatrix& m, std::size_t n1, std::size_t n2, std::size_t n3) {
  if (m.dim() != n1 * n2 * n3) throw DimensionMismatch("nkp_rank1_3d: dim(M) != n1 n2 n3");
  const Tensor3 t = rearrange_3d(m, n1, n2, n3);
  const double tnorm = t.norm();

  NkpResult out;
  if (tnorm == 0.0) {
    out.factors = {SymMatrix(n1), SymMatrix(n2), SymMatrix(n3)};
    out.convergence_history = {0.0};
    return out;
  }

  Vec u = leading_mode_vector(t, 1);
  Vec v = leading_mode_vector(t, 2);
  Vec w = leading_mode_vector(t, 3);

  auto sigma_of = [&]() { return dot(contract_23(t, v, w), u); };
  // direct evaluation; the Parseval form ||T||^2 - sigma^2 cancels
  // catastrophically once the fit is good
  auto residual_of = [&](double sig) {
    double acc = 0.0;
    for (std::size_t a = 0; a < t.d1; ++a)
      for (std::size_t b = 0; b < t.d2; ++b)
        for (std::size_t c = 0; c < t.d3; ++c) {
          const double diff = t.at(a, b, c) - sig * u[a] * v[b] * w[c];
          acc += diff * diff;
        }
    return std::sqrt(acc);
  };

  double sigma = sigma_of();
  out.convergence_history.push_back(residual_of(sigma));

  const std::size_t max_sweeps = 200;
  const double tol = 1e-12;
  out.converged = false;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    u = contract_23(t, v, w);
    normalize(u);
    v = contract_13(t, u, w);
    normalize(v);
    w = contract_12(t, u, v);
    const double sig_new = norm2(w);
    normalize(w);
    out.convergence_history.push_back(residual_of(sig_new));
    if (std::fabs(sig_new - std::fabs(sigma)) <= tol * std::fabs(sig_new)) {
      sigma = sig_new;
      out.converged = true;
      break;
    }
    sigma = sig_new;
  }
  sigma = sigma_of();

  SymMatrix fu = reshape_symmetrized(u, n1);
  if (trace_of(fu) < 0.0) {
    for (double& x : u) x = -x;
    sigma = -sigma;
  }
  SymMatrix fv = reshape_symmetrized(v, n2);
  if (trace_of(fv) < 0.0) {
    for (double& x : v) x = -x;
    sigma = -sigma;
  }
  if (sigma < 0.0) {
    for (double& x : w) x = -x;
    sigma = -sigma;
  }
  const double scale = std::cbrt(sigma);
  out.factors.push_back(scale * reshape_symmetrized(u, n1));
  out.factors.push_back(scale * reshape_symmetrized(v, n2));
  out.factors.push_back(scale * reshape_symmetrized(w, n3));
  out.truncation_error = out.convergence_history.back();
  out.kronecker_rank = 1;
  return out;
}

CondBound cond_bound(const KronOperator& m_op) {
  const auto& terms = m_op.terms();
  if (terms.empty()) throw DimensionMismatch("cond_bound: empty operator");
  if (terms.front().factors.size() != 2)
    throw DimensionMismatch("cond_bound: two-factor operators only");

  CondBound out;
  const double s1 = terms.front().weight;
  const SymMatrix& u1 = terms.front().factors[0];
  const SymMatrix& v1 = terms.front().factors[1];

  for (std::size_t i = 1; i < terms.size(); ++i) {
    Vec lu = gen_eig_values(terms[i].factors[0], u1);
    Vec lv = gen_eig_values(terms[i].factors[1], v1);
    const double mu = std::max(std::fabs(lu.front()), std::fabs(lu.back()));
    const double mv = std::max(std::fabs(lv.front()), std::fabs(lv.back()));
    out.delta += terms[i].weight / s1 * mu * mv;
  }
  out.applicable = out.delta < 1.0;
  if (out.applicable) out.bound = (1.0 + out.delta) / (1.0 - out.delta);

  SymMatrix m = m_op.materialize();
  SymMatrix mt = KronOperator::single({u1, v1}, s1).materialize();
  Vec vals = gen_eig_values(m, mt);
  out.kappa = vals.back() / vals.front();
  return out;
}

std::pair<double, double> hoffman_wielandt_check(const SymMatrix& m, const SymMatrix& mt) {
  if (m.dim() != mt.dim()) throw DimensionMismatch("hoffman_wielandt_check dimension mismatch");
  Vec lm = sym_eig(m).values;
  Vec lt = sym_eig(mt).values;
  double lhs = 0.0;
  for (std::size_t i = 0; i < lm.size(); ++i) lhs += (lm[i] - lt[i]) * (lm[i] - lt[i]);
  SymMatrix e = mt - m;
  const double rhs = e.frobenius_norm();
  return {lhs, rhs * rhs};
}

std::vector<EquivalenceRow> spectral_equivalence_scan(
    const std::function<DiscreteModel(int)>& make_model, const std::vector<int>& meshes,
    std::size_t rank) {
  std::vector<EquivalenceRow> rows;
  rows.reserve(meshes.size());
  for (int mesh : meshes) {
    DiscreteModel model = make_model(mesh);
    SymMatrix m = model.mass();
    const std::size_t n1 = model.free_per_dir[0].size();
    const std::size_t n2 = model.free_per_dir[1].size();
    EquivalenceRow row;
    row.h = 1.0 / static_cast<double>(mesh);
    KronOperator approx = nkp_rank_r(m, n1, n2, rank);
    SymMatrix mt = approx.materialize(8192);
    try {
      cholesky(mt);
    } catch (const NotPositiveDefinite&) {
      row.definite = false;
      rows.push_back(row);
      continue;
    }
    Vec vals = gen_eig_values(m, mt);
    row.lambda_min = vals.front();
    row.lambda_max = vals.back();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lumplab
