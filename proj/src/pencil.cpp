#include "lumplab/pencil.hpp"

#include <cmath>
#include <sstream>

namespace lumplab {

Pencil Pencil::make(SymMatrix a, SymMatrix b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("pencil operands differ in dimension");
  Pencil p{std::move(a), std::move(b), false};
  try {
    cholesky(p.B);
    p.B_definite = true;
  } catch (const NotPositiveDefinite&) {
    p.B_definite = false;
  }
  return p;
}

bool is_singular_pencil(const SymMatrix& a, const SymMatrix& b, double tol) {
  // x in ker(A) and ker(B) iff x^T (A^2 + B^2) x = 0
  Matrix ad = a.dense(), bd = b.dense();
  Matrix s = ad * ad + bd * bd;
  SymMatrix s_sym = SymMatrix::from_general(s);
  auto eg = sym_eig(s_sym);
  const double scale = std::max(s_sym.frobenius_norm(), 1e-300);
  return eg.values.front() <= tol * scale;
}

GenEigResult gen_eig(const Pencil& p, double tol) {
  const std::size_t n = p.A.dim();
  Matrix l;
  try {
    l = cholesky(p.B);
  } catch (const NotPositiveDefinite&) {
    if (is_singular_pencil(p.A, p.B))
      throw SingularPencilError("singular pencil: A and B share a near-null vector");
    throw;
  }

  // C = L^{-1} A L^{-T} via triangular solves, then a standard eigensolve.
  Matrix c(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = p.A(i, j);
    c.set_column(j, forward_solve(l, col));
  }
  Matrix ct(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = c(i, j);
    ct.set_column(i, forward_solve(l, row));  // row i of C L^{-T}
  }
  SymMatrix reduced = SymMatrix::from_general(ct.transpose());
  EigResult eg = sym_eig(reduced, tol);

  GenEigResult res;
  res.values = std::move(eg.values);
  res.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k)
    res.vectors.set_column(k, backward_solve_transposed(l, eg.vectors.column(k)));
  return res;
}

GenEigResult gen_eig(const SymMatrix& a, const SymMatrix& b, double tol) {
  return gen_eig(Pencil{a, b, true}, tol);
}

Vec gen_eig_values(const SymMatrix& a, const SymMatrix& b, double tol) {
  return gen_eig(a, b, tol).values;
}

LoewnerOrder loewner_compare(const SymMatrix& x, const SymMatrix& y, double tol) {
  if (x.dim() != y.dim()) throw DimensionMismatch("loewner_compare dimension mismatch");
  SymMatrix d = x - y;
  const double dnorm = d.frobenius_norm();
  if (dnorm <= tol * std::max(x.frobenius_norm(), 1.0)) return LoewnerOrder::equal;
  auto eg = sym_eig(d);
  const double band = tol * dnorm;
  const bool has_neg = eg.values.front() < -band;
  const bool has_pos = eg.values.back() > band;
  if (!has_neg) return LoewnerOrder::first_dominates;
  if (!has_pos) return LoewnerOrder::second_dominates;
  return LoewnerOrder::indefinite;
}

bool BoundReport::all_hold(double tol) const {
  for (const auto& r : rows) {
    const double band = tol * std::max({std::fabs(r.lower), std::fabs(r.upper), 1.0});
    if (r.attained < r.lower - band || r.attained > r.upper + band) return false;
  }
  return true;
}

std::string BoundReport::to_csv() const {
  std::ostringstream os;
  os << "k,lambda,lower,upper,bound_name\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.k << "," << r.attained << "," << r.lower << "," << r.upper << "," << r.bound_name
       << "\n";
  return os.str();
}

std::string BoundReport::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << (i ? "," : "") << "{\"k\":" << r.k << ",\"lambda\":" << r.attained
       << ",\"lower\":" << r.lower << ",\"upper\":" << r.upper << ",\"bound_name\":\""
       << r.bound_name << "\"}";
  }
  os << "]";
  return os.str();
}

BoundReport sandwich_bounds(const SymMatrix& a, const SymMatrix& b, const SymMatrix& c) {
  Vec lab = gen_eig_values(a, b);
  Vec lac = gen_eig_values(a, c);
  Vec lcb = gen_eig_values(c, b);
  const std::size_t n = lab.size();
  BoundReport rep;
  rep.rows.reserve(2 * n);
  for (std::size_t k = 0; k < n; ++k)
    rep.rows.push_back({k + 1, lab[k], lac[k] * lcb.front(), lac[k] * lcb.back(),
                        "eig_bounds_4a"});
  for (std::size_t k = 0; k < n; ++k)
    rep.rows.push_back({k + 1, lab[k], lac.front() * lcb[k], lac.back() * lcb[k],
                        "eig_bounds_4b"});
  return rep;
}

BoundReport ratio_bounds(const SymMatrix& k_mat, const SymMatrix& m, const SymMatrix& mt) {
  Vec lkm = gen_eig_values(k_mat, m);
  Vec lkmt = gen_eig_values(k_mat, mt);
  Vec lmmt = gen_eig_values(m, mt);
  BoundReport rep;
  rep.rows.reserve(lkm.size());
  for (std::size_t k = 0; k < lkm.size(); ++k)
    rep.rows.push_back({k + 1, lkmt[k] / lkm[k], lmmt.front(), lmmt.back(), "ratio_eq8"});
  return rep;
}

BoundReport bauer_fike_bounds(const Pencil& p, const Pencil& pt) {
  if (p.A.dim() != pt.A.dim()) throw DimensionMismatch("bauer_fike_bounds dimension mismatch");
  const std::size_t n = p.A.dim();
  SymMatrix e = pt.A - p.A;
  SymMatrix f = pt.B - p.B;

  GenEigResult base = gen_eig(p.A, p.B);
  GenEigResult pert = gen_eig(pt.A, pt.B);
  const double lam1_bt = sym_eig(pt.B).values.front();
  const double lam1_b = sym_eig(p.B).values.front();
  if (!(lam1_bt > 0.0)) throw NotPositiveDefinite("perturbed B is not positive definite", 0);
  if (!(lam1_b > 0.0)) throw NotPositiveDefinite("B is not positive definite", 0);

  auto enorm2 = sym_eig(e).values;
  auto fnorm2 = sym_eig(f).values;
  const double e_2 = std::max(std::fabs(enorm2.front()), std::fabs(enorm2.back()));
  const double f_2 = std::max(std::fabs(fnorm2.front()), std::fabs(fnorm2.back()));

  auto min_dist = [](const Vec& vals, double x) {
    double best = std::fabs(vals.front() - x);
    for (double v : vals) best = std::min(best, std::fabs(v - x));
    return best;
  };

  BoundReport rep;
  rep.rows.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec u = base.vectors.column(i);
    const double un = norm2(u);
    const double resid = (norm2(e.apply(u)) + std::fabs(base.values[i]) * norm2(f.apply(u))) / un;
    rep.rows.push_back(
        {i + 1, min_dist(pert.values, base.values[i]), 0.0, resid / lam1_bt, "bauer_fike_9a"});
  }
  for (std::size_t i = 0; i < n; ++i) {
    Vec u = pert.vectors.column(i);
    const double un = norm2(u);
    const double resid = (norm2(e.apply(u)) + std::fabs(pert.values[i]) * norm2(f.apply(u))) / un;
    rep.rows.push_back(
        {i + 1, min_dist(base.values, pert.values[i]), 0.0, resid / lam1_b, "bauer_fike_9b"});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double bound = (e_2 + std::fabs(base.values[i]) * f_2) / lam1_bt;
    rep.rows.push_back(
        {i + 1, std::fabs(pert.values[i] - base.values[i]), 0.0, bound, "crawford_10"});
  }
  return rep;
}

Vec eigenangles(const Vec& values) {
  Vec theta(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) theta[i] = std::atan2(1.0, values[i]);
  return theta;
}

double critical_dt(const SymMatrix& k_mat, const SymMatrix& m_like) {
  Vec vals = gen_eig_values(k_mat, m_like);
  if (!(vals.back() > 0.0)) throw NotPositiveDefinite("pencil (K, M) has no positive spectrum", 0);
  return 2.0 / std::sqrt(vals.back());
}

double critical_dt(const SymMatrix& k_mat, const MassOperator& m_like) {
  return critical_dt(k_mat, m_like.dense_matrix());
}

}  // namespace lumplab
