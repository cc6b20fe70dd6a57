#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lumplab/lumping.hpp"
#include "lumplab/nkp.hpp"
#include "lumplab/pencil.hpp"
#include "oracles.hpp"

using namespace lumplab;

namespace {

DiscreteModel appendix_model(int p, int m) {
  return assemble_2d({SplineSpace(p, m), SplineSpace(p, m)}, DensityField::named("appendix"),
                     GeometryMap::named("unit_square"),
                     {parse_bc("dirichlet"), parse_bc("dirichlet")});
}

}  // namespace

TEST_CASE("rearrange sends Kronecker products to rank-1 matrices") {
  SymMatrix b{{1.0, 2.0}, {2.0, 4.0}};
  SymMatrix c{{5.0, 6.0}, {6.0, 8.0}};
  SymMatrix m = kron_product(b, c);
  Rearranged r = rearrange(m, 2, 2);
  // R(B x C) = vec(B) vec(C)^T
  Vec vb{b(0, 0), b(1, 0), b(0, 1), b(1, 1)};
  Vec vc{c(0, 0), c(1, 0), c(0, 1), c(1, 1)};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(r.matrix(i, j) == vb[i] * vc[j]);
  auto sv = svd(r.matrix);
  CHECK(sv.singular_values[1] <= 1e-14 * sv.singular_values[0]);
}

TEST_CASE("rearrange: linearity, norm preservation, bijection") {
  Rng rng(401);
  SymMatrix m1 = oracle::random_symmetric(rng, 6);
  SymMatrix m2 = oracle::random_symmetric(rng, 6);
  Rearranged r1 = rearrange(m1, 2, 3);
  Rearranged r2 = rearrange(m2, 2, 3);
  Rearranged rsum = rearrange(SymMatrix::from_general(2.0 * m1.dense() + 3.0 * m2.dense()), 2, 3);
  Matrix lin = 2.0 * r1.matrix + 3.0 * r2.matrix;
  CHECK((lin - rsum.matrix).frobenius_norm() < 1e-14);

  CHECK(r1.matrix.frobenius_norm() ==
        doctest::Approx(m1.frobenius_norm()).epsilon(1e-12));

  SymMatrix back = unrearrange(r1.matrix, 2, 3);
  CHECK((back - m1).frobenius_norm() == 0.0);

  // two Kronecker terms give rank <= 2
  SymMatrix s = kron_product(oracle::random_symmetric(rng, 2), oracle::random_symmetric(rng, 3)) +
                kron_product(oracle::random_symmetric(rng, 2), oracle::random_symmetric(rng, 3));
  auto sv = svd(rearrange(s, 2, 3).matrix);
  CHECK(sv.singular_values[2] <= 1e-13 * std::max(sv.singular_values[0], 1.0));

  CHECK_THROWS_AS(rearrange(m1, 4, 2), DimensionMismatch);
}

TEST_CASE("nkp_rank1 recovers exact Kronecker products") {
  Rng rng(409);
  SymMatrix b = oracle::random_spd(rng, 3);
  SymMatrix c = oracle::random_spd(rng, 4);
  SymMatrix m = kron_product(b, c);
  NkpResult res = nkp_rank1(m, 3, 4);
  CHECK(res.truncation_error <= 1e-12 * m.frobenius_norm());
  CHECK(res.kronecker_rank == 1);
  // factors match originals up to reciprocal scalings
  const double alpha = res.factors[0](0, 0) / b(0, 0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(res.factors[0](i, j) == doctest::Approx(alpha * b(i, j)).epsilon(1e-10));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(res.factors[1](i, j) == doctest::Approx(c(i, j) / alpha).epsilon(1e-10));
  SymMatrix rec = kron_product(res.factors[0], res.factors[1]);
  CHECK((rec - m).frobenius_norm() <= 1e-12 * m.frobenius_norm());
}

TEST_CASE("separable unit-square mass has a negligible second singular value") {
  DiscreteModel model = assemble_2d({SplineSpace(2, 5), SplineSpace(2, 5)},
                                    DensityField::constant(), GeometryMap::named("unit_square"),
                                    {parse_bc("dirichlet"), parse_bc("dirichlet")});
  SymMatrix m = model.mass();
  const std::size_t nf = model.free_per_dir[0].size();
  NkpResult res = nkp_rank1(m, nf, nf);
  CHECK(res.singular_values[1] <= 1e-12 * res.singular_values[0]);
}

TEST_CASE("error identity and optimality of the rank-1 truncation") {
  Rng rng(419);
  for (int trial = 0; trial < 3; ++trial) {
    SymMatrix m = oracle::random_symmetric_blocks(rng, 3, 3);
    NkpResult res = nkp_rank1(m, 3, 3);
    SymMatrix approx = kron_product(res.factors[0], res.factors[1]);
    double tail = 0.0;
    for (std::size_t i = 1; i < res.singular_values.size(); ++i)
      tail += res.singular_values[i] * res.singular_values[i];
    CHECK((approx - m).frobenius_norm() ==
          doctest::Approx(std::sqrt(tail)).epsilon(1e-10));
    CHECK(res.truncation_error == doctest::Approx(std::sqrt(tail)).epsilon(1e-12));

    // optimality against random competitors
    const double best = (approx - m).frobenius_norm();
    for (int comp = 0; comp < 200; ++comp) {
      SymMatrix bp = oracle::random_symmetric(rng, 3);
      SymMatrix cp = oracle::random_symmetric(rng, 3);
      CHECK((kron_product(bp, cp) - m).frobenius_norm() >= best - 1e-12);
    }
  }
}

TEST_CASE("symmetry inheritance of the factors") {
  DiscreteModel model = appendix_model(2, 4);
  SymMatrix m = model.mass();
  const std::size_t nf = model.free_per_dir[0].size();
  NkpResult res = nkp_rank1(m, nf, nf);
  // the raw reshaped singular vectors must already be symmetric to 1e-12, so
  // the symmetrized factors still attain the optimal truncation error
  SymMatrix rec = kron_product(res.factors[0], res.factors[1]);
  const double err = (rec - m).frobenius_norm();
  CHECK(err <= res.truncation_error * (1.0 + 1e-10) + 1e-12 * m.frobenius_norm());
  for (const auto& f : res.factors) CHECK(cholesky(f)(0, 0) > 0.0);  // SPD factors
}

TEST_CASE("nkp_rank_r: full rank reproduces M, r = 1 matches nkp_rank1") {
  Rng rng(431);
  SymMatrix m = oracle::random_symmetric_blocks(rng, 2, 4);
  Rearranged r = rearrange(m, 2, 4);
  auto sv = svd(r.matrix);
  std::size_t full = 0;
  for (double s : sv.singular_values)
    if (s > 0.0) ++full;
  KronOperator op = nkp_rank_r(m, 2, 4, full);
  CHECK((op.materialize() - m).frobenius_norm() <= 1e-10 * m.frobenius_norm());

  KronOperator op1 = nkp_rank_r(m, 2, 4, 1);
  NkpResult res1 = nkp_rank1(m, 2, 4);
  SymMatrix a = op1.materialize();
  SymMatrix b = kron_product(res1.factors[0], res1.factors[1]);
  CHECK((a - b).frobenius_norm() <= 1e-12 * std::max(a.frobenius_norm(), 1.0));

  CHECK_THROWS_AS(nkp_rank_r(m, 2, 4, 100), DimensionMismatch);
}

TEST_CASE("separable-plus-one geometry has Kronecker rank exactly 2") {
  DiscreteModel model = assemble_2d({SplineSpace(3, 6), SplineSpace(3, 6)},
                                    DensityField::constant(),
                                    GeometryMap::named("stretched_square"),
                                    {parse_bc("dirichlet"), parse_bc("dirichlet")});
  SymMatrix m = model.mass();
  const std::size_t nf = model.free_per_dir[0].size();
  NkpResult res = nkp_rank1(m, nf, nf);
  CHECK(res.singular_values[1] > 1e-6 * res.singular_values[0]);
  CHECK(res.singular_values[2] <= 1e-12 * res.singular_values[0]);
  KronOperator r2 = nkp_rank_r(m, nf, nf, 2);
  CHECK((r2.materialize(4096) - m).frobenius_norm() <= 1e-10 * m.frobenius_norm());
}

TEST_CASE("appendix density: numerical Kronecker rank in the 5-7 band") {
  DiscreteModel model = appendix_model(3, 20);
  SymMatrix m = model.mass();
  const std::size_t nf = model.free_per_dir[0].size();
  NkpResult res = nkp_rank1(m, nf, nf);
  CHECK(res.kronecker_rank >= 5);
  CHECK(res.kronecker_rank <= 7);
}

TEST_CASE("cond_bound: single term and synthetic rank-2 operators") {
  Rng rng(443);
  SymMatrix u = oracle::random_spd(rng, 3), v = oracle::random_spd(rng, 3);
  CondBound one = cond_bound(KronOperator::single({u, v}, 2.0));
  CHECK(one.delta == 0.0);
  CHECK(one.applicable);
  CHECK(one.kappa == doctest::Approx(1.0).epsilon(1e-9));

  for (int trial = 0; trial < 5; ++trial) {
    SymMatrix u1 = oracle::random_spd(rng, 3), v1 = oracle::random_spd(rng, 3);
    // second-term factor pencils with |lambda| <= 1: scaled-down copies
    SymMatrix u2 = SymMatrix::from_general(0.7 * oracle::random_symmetric(rng, 3).dense());
    SymMatrix v2 = SymMatrix::from_general(0.7 * oracle::random_symmetric(rng, 3).dense());
    KronOperator op({KronTerm{1.0, {u1, v1}}, KronTerm{0.1, {u2, v2}}});
    CondBound cb;
    try {
      cb = cond_bound(op);
    } catch (const NotPositiveDefinite&) {
      continue;  // rank-2 sum happened to lose definiteness
    }
    if (!cb.applicable) continue;
    CHECK(cb.kappa <= cb.bound + 1e-8);
  }
}

TEST_CASE("hoffman_wielandt_check: equality for diagonal shifts") {
  Rng rng(449);
  SymMatrix m = oracle::random_symmetric(rng, 6);
  auto same = hoffman_wielandt_check(m, m);
  CHECK(same.first <= 1e-18);

  const double eps = 1e-3;
  SymMatrix shifted = m + SymMatrix::from_general(eps * Matrix::identity(6));
  auto sh = hoffman_wielandt_check(m, shifted);
  CHECK(sh.first == doctest::Approx(6.0 * eps * eps).epsilon(1e-9));
  CHECK(sh.second == doctest::Approx(6.0 * eps * eps).epsilon(1e-12));

  DiscreteModel model = appendix_model(2, 4);
  SymMatrix mm = model.mass();
  const std::size_t nf = model.free_per_dir[0].size();
  NkpResult res = nkp_rank1(mm, nf, nf);
  auto hw = hoffman_wielandt_check(mm, kron_product(res.factors[0], res.factors[1]));
  CHECK(hw.first <= hw.second * (1.0 + 1e-10));
}

TEST_CASE("3D rank-1: exact recovery and perturbation behaviour") {
  Rng rng(457);
  SymMatrix b = oracle::random_spd(rng, 2), c = oracle::random_spd(rng, 3),
            d = oracle::random_spd(rng, 2);
  SymMatrix m = KronOperator::single({b, c, d}).materialize();
  NkpResult res = nkp_rank1_3d(m, 2, 3, 2);
  CHECK(res.converged);
  CHECK(res.truncation_error <= 1e-10 * m.frobenius_norm());
  SymMatrix rec = KronOperator::single({res.factors[0], res.factors[1], res.factors[2]})
                      .materialize();
  CHECK((rec - m).frobenius_norm() <= 1e-9 * m.frobenius_norm());

  // monotone non-increasing residual history, final <= HOSVD initialization
  SymMatrix noise = oracle::random_symmetric(rng, 12);
  SymMatrix pert = m + SymMatrix::from_general(1e-3 * noise.dense());
  NkpResult rp = nkp_rank1_3d(pert, 2, 3, 2);
  for (std::size_t s = 1; s < rp.convergence_history.size(); ++s)
    CHECK(rp.convergence_history[s] <= rp.convergence_history[s - 1] + 1e-12);
  CHECK(rp.convergence_history.back() <= rp.convergence_history.front() + 1e-12);
}

TEST_CASE("3D rank-1 on the separable unit cube mass") {
  DiscreteModel model = assemble_3d({SplineSpace(2, 3), SplineSpace(2, 4), SplineSpace(2, 3)},
                                    DensityField::constant(),
                                    {parse_bc("dirichlet"), parse_bc("dirichlet"), parse_bc("dirichlet")});
  SymMatrix m = model.mass();
  NkpResult res = nkp_rank1_3d(m, model.free_per_dir[0].size(), model.free_per_dir[1].size(),
                               model.free_per_dir[2].size());
  CHECK(res.converged);
  CHECK(res.truncation_error <= 1e-10 * m.frobenius_norm());
}

TEST_CASE("spectral equivalence scan") {
  auto separable = [](int mesh) {
    return assemble_2d({SplineSpace(2, mesh), SplineSpace(2, mesh)}, DensityField::constant(),
                       GeometryMap::named("unit_square"),
                       {parse_bc("dirichlet"), parse_bc("dirichlet")});
  };
  for (const auto& row : spectral_equivalence_scan(separable, {4, 6}, 1)) {
    CHECK(row.definite);
    CHECK(row.lambda_min == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(row.lambda_max == doctest::Approx(1.0).epsilon(1e-9));
  }

  auto appendix = [](int mesh) { return appendix_model(2, mesh); };
  auto rows = spectral_equivalence_scan(appendix, {4, 6, 8}, 1);
  for (const auto& row : rows) {
    CHECK(row.definite);
    CHECK(std::isfinite(row.lambda_min));
    CHECK(std::isfinite(row.lambda_max));
    CHECK(row.lambda_min > 0.0);
    CHECK(row.lambda_min <= 1.0 + 1e-9);
  }

  // full-rank substitute is exact
  DiscreteModel m4 = appendix_model(2, 4);
  SymMatrix mm = m4.mass();
  const std::size_t nf = m4.free_per_dir[0].size();
  NkpResult probe = nkp_rank1(mm, nf, nf);
  auto full_rows = spectral_equivalence_scan(appendix, {4}, probe.kronecker_rank);
  CHECK(full_rows[0].lambda_min == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(full_rows[0].lambda_max == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("two-level chain: P~_ii spectra stay below the NKP spectrum") {
  DiscreteModel model = appendix_model(2, 5);
  SymMatrix m = model.mass();
  SymMatrix k = model.stiffness();
  const std::size_t nf = model.free_per_dir[0].size();
  NkpResult res = nkp_rank1(m, nf, nf);
  SymMatrix mt = kron_product(res.factors[0], res.factors[1]);
  Vec lk_mt = gen_eig_values(k, mt);
  for (std::size_t i = 1; i <= 2; ++i) {
    SymMatrix pii = make_Pij({res.factors[0], res.factors[1]}, {i, i}).materialize();
    Vec lk_p = gen_eig_values(k, pii);
    for (std::size_t kk = 0; kk < lk_p.size(); ++kk)
      CHECK(lk_p[kk] <= lk_mt[kk] + 1e-10 * std::max(1.0, std::fabs(lk_mt[kk])));
  }
}

TEST_CASE("ratio bounds apply to the NKP substitute on every catalogue geometry") {
  auto check_geometry = [](DiscreteModel model) {
    SymMatrix m = model.mass();
    SymMatrix k = model.stiffness();
    const std::size_t n1 = model.free_per_dir[0].size();
    const std::size_t n2 = model.free_per_dir[1].size();
    NkpResult res = nkp_rank1(m, n1, n2);
    SymMatrix mt = kron_product(res.factors[0], res.factors[1]);
    auto rep = ratio_bounds(k, m, mt);
    CHECK(rep.all_hold(1e-9));
  };
  check_geometry(appendix_model(2, 5));
  for (const char* geo : {"stretched_square", "reentrant_corner"})
    check_geometry(assemble_2d({SplineSpace(2, 5), SplineSpace(2, 5)}, DensityField::constant(),
                               GeometryMap::named(geo),
                               {parse_bc("dirichlet"), parse_bc("dirichlet")}));
}
