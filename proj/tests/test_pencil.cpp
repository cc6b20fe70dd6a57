#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lumplab/assemble.hpp"
#include "lumplab/lumping.hpp"
#include "lumplab/pencil.hpp"
#include "oracles.hpp"

using namespace lumplab;

namespace {

const SymMatrix kA{{6.0, 0.0}, {0.0, 6.0}};
const SymMatrix kB{{2.0, 1.0}, {1.0, 2.0}};
const SymMatrix kBt{{3.0, 0.0}, {0.0, 2.0}};

}  // namespace

TEST_CASE("gen_eig with B = I reduces to sym_eig") {
  Rng rng(101);
  SymMatrix a = oracle::random_symmetric(rng, 6);
  auto ge = gen_eig(a, SymMatrix::identity(6));
  auto se = sym_eig(a);
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(ge.values[k] == doctest::Approx(se.values[k]).epsilon(1e-12));
}

TEST_CASE("two-by-two pencils with known spectra") {
  auto r1 = gen_eig(kA, kB);
  CHECK(r1.values[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r1.values[1] == doctest::Approx(6.0).epsilon(1e-13));

  auto r2 = gen_eig(kA, kBt);
  CHECK(r2.values[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r2.values[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("gen_eig residual and B-orthonormality") {
  Rng rng(103);
  for (std::size_t n : {1ul, 4ul, 12ul, 80ul}) {
    SymMatrix a = oracle::random_symmetric(rng, n);
    SymMatrix b = oracle::random_spd(rng, n);
    auto r = gen_eig(a, b);
    const double an = a.frobenius_norm(), bn = b.frobenius_norm();
    for (std::size_t k = 0; k < n; ++k) {
      Vec u = r.vectors.column(k);
      Vec resid = a.apply(u);
      axpy(-r.values[k], b.apply(u), resid);
      CHECK(norm2(resid) <= 1e-9 * (an + std::fabs(r.values[k]) * bn));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const double g = dot(r.vectors.column(i), b.apply(r.vectors.column(j)));
        CHECK(std::fabs(g - (i == j ? 1.0 : 0.0)) < 1e-8);
      }
  }
}

TEST_CASE("gen_eig rejects indefinite B, detects singular pencils") {
  SymMatrix indef{{1.0, 2.0}, {2.0, 1.0}};
  CHECK_THROWS_AS(gen_eig(SymMatrix::identity(2), indef), NotPositiveDefinite);

  // shared null vector: last row/col zero in both
  SymMatrix a(3), b(3);
  a.set(0, 0, 2.0);
  a.set(1, 1, 1.0);
  b.set(0, 0, 1.0);
  b.set(1, 1, 3.0);
  CHECK(is_singular_pencil(a, b));
  CHECK_THROWS_AS(gen_eig(Pencil{a, b, false}), SingularPencilError);
}

TEST_CASE("loewner_compare classifications") {
  Rng rng(107);
  SymMatrix x = oracle::random_symmetric(rng, 4);
  CHECK(loewner_compare(x, x) == LoewnerOrder::equal);

  SymMatrix m = oracle::random_nonnegative_spd(rng, 5);
  CHECK(loewner_compare(lump(m), m) == LoewnerOrder::first_dominates);
  CHECK(loewner_compare(m, lump(m)) == LoewnerOrder::second_dominates);

  SymMatrix e = kBt - kB;
  CHECK(loewner_compare(e, SymMatrix(2)) == LoewnerOrder::indefinite);
  auto eg = sym_eig(e);
  CHECK(eg.values[0] == doctest::Approx((1.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-13));
  CHECK(eg.values[1] == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-13));
}

TEST_CASE("sandwich_bounds holds with C = B and on random SPD triples") {
  Rng rng(109);
  SymMatrix a = oracle::random_spd(rng, 5);
  SymMatrix b = oracle::random_spd(rng, 5);
  auto eq = sandwich_bounds(a, b, b);
  CHECK(eq.all_hold(1e-9));
  for (const auto& row : eq.rows) {
    if (row.bound_name != "eig_bounds_4a") continue;  // lambda(C,B) = 1 collapses this chain
    CHECK(row.lower == doctest::Approx(row.attained).epsilon(1e-8));
    CHECK(row.upper == doctest::Approx(row.attained).epsilon(1e-8));
  }

  for (int trial = 0; trial < 10; ++trial) {
    SymMatrix x = oracle::random_spd(rng, 5);
    SymMatrix y = oracle::random_spd(rng, 5);
    SymMatrix z = oracle::random_spd(rng, 5);
    CHECK(sandwich_bounds(x, y, z).all_hold(1e-9));
  }
}

TEST_CASE("sandwich bounds on an assembled stiffness/lumped/consistent triple") {
  DiscreteModel model = assemble_1d(SplineSpace(2, 12), DensityField::constant(),
                                    GeometryMap::named("unit_interval"), parse_bc("dirichlet"));
  SymMatrix k = model.stiffness(), m = model.mass();
  auto rep = sandwich_bounds(k, lump(m), m);
  CHECK(rep.all_hold(1e-9));
}

TEST_CASE("ratio envelope for the row-sum operator has upper bound one") {
  DiscreteModel model = assemble_1d(SplineSpace(2, 20), DensityField::constant(),
                                    GeometryMap::named("unit_interval"), parse_bc("dirichlet"));
  SymMatrix k = model.stiffness(), m = model.mass();
  auto rep = ratio_bounds(k, m, lump(m));
  CHECK(rep.all_hold(1e-9));
  for (const auto& r : rep.rows) {
    CHECK(r.upper == doctest::Approx(1.0).epsilon(1e-9));  // nonnegative mass
    CHECK(r.attained <= r.upper * (1.0 + 1e-9));
    CHECK(r.attained >= r.lower * (1.0 - 1e-9));
  }
}

TEST_CASE("ratio_bounds: Mt = M gives all ratios one") {
  Rng rng(113);
  SymMatrix k = oracle::random_spd(rng, 6);
  SymMatrix m = oracle::random_spd(rng, 6);
  auto rep = ratio_bounds(k, m, m);
  for (const auto& r : rep.rows) CHECK(r.attained == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.all_hold(1e-9));
}

TEST_CASE("bauer_fike_bounds: zero perturbation and random perturbations") {
  Rng rng(127);
  SymMatrix a = oracle::random_symmetric(rng, 6);
  SymMatrix b = oracle::random_spd(rng, 6);
  auto zero = bauer_fike_bounds(Pencil::make(a, b), Pencil::make(a, b));
  for (const auto& r : zero.rows) {
    CHECK(std::fabs(r.attained) < 1e-9);
    CHECK(std::fabs(r.upper) < 1e-9);
  }

  for (int trial = 0; trial < 10; ++trial) {
    SymMatrix a0 = oracle::random_symmetric(rng, 6);
    SymMatrix b0 = oracle::random_spd(rng, 6, 1.0);
    SymMatrix e = oracle::random_symmetric(rng, 6, -0.05, 0.05);
    SymMatrix f = oracle::random_symmetric(rng, 6, -0.02, 0.02);
    auto rep = bauer_fike_bounds(Pencil::make(a0, b0), Pencil::make(a0 + e, b0 + f));
    CHECK(rep.all_hold(1e-10));
  }
}

TEST_CASE("eigenangles") {
  Vec theta = eigenangles({0.0, 1.0, std::sqrt(3.0)});
  CHECK(theta[0] == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
  CHECK(theta[1] == doctest::Approx(M_PI / 4.0).epsilon(1e-15));
  CHECK(theta[2] == doctest::Approx(M_PI / 6.0).epsilon(1e-14));
  CHECK(theta[0] > theta[1]);
  CHECK(theta[1] > theta[2]);
}

TEST_CASE("critical_dt trivial cases") {
  Rng rng(131);
  SymMatrix m = oracle::random_spd(rng, 5);
  CHECK(critical_dt(m, m) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(critical_dt(4.0 * m, m) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("equivalent pencils: congruence preserves the spectrum") {
  Rng rng(137);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng.index(5);
    SymMatrix a = oracle::random_symmetric(rng, n);
    SymMatrix b = oracle::random_spd(rng, n);
    Matrix f(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) f(i, j) = rng.uniform(-1.0, 1.0);
      f(i, i) += 3.0;  // keep it comfortably invertible
    }
    Matrix ft = f.transpose();
    SymMatrix a2 = SymMatrix::from_general(ft * a.dense() * f);
    SymMatrix b2 = SymMatrix::from_general(ft * b.dense() * f);
    Vec s1 = gen_eig_values(a, b);
    Vec s2 = gen_eig_values(a2, b2);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::fabs(s1[k] - s2[k]) <= 1e-8 * std::max(std::fabs(s1[k]), 1.0));
    }
  }
}

TEST_CASE("equivalence conditions: PSD error implies eigenvalue decrease") {
  Rng rng(139);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.index(4);
    SymMatrix a = oracle::random_spd(rng, n);
    SymMatrix b = oracle::random_spd(rng, n);
    SymMatrix psd = oracle::random_spd(rng, n, 0.0);
    SymMatrix bt = b + psd;
    Vec lbbt = gen_eig_values(b, bt);
    CHECK(lbbt.back() <= 1.0 + 1e-10);
    Vec lab = gen_eig_values(a, b);
    Vec labt = gen_eig_values(a, bt);
    for (std::size_t k = 0; k < n; ++k)
      CHECK(labt[k] <= lab[k] + 1e-10 * std::fabs(lab[k]));
  }
}

TEST_CASE("SPD/SPD pencils have strictly positive spectra") {
  Rng rng(149);
  for (int trial = 0; trial < 10; ++trial) {
    SymMatrix a = oracle::random_spd(rng, 6);
    SymMatrix b = oracle::random_spd(rng, 6);
    Vec vals = gen_eig_values(a, b);
    CHECK(vals.front() > 1e-12);
  }
}

TEST_CASE("bound report serialization") {
  BoundReport rep;
  rep.rows.push_back({1, 0.5, 0.0, 1.0, "demo"});
  const std::string csv = rep.to_csv();
  CHECK(csv.find("k,lambda,lower,upper,bound_name") == 0);
  CHECK(csv.find("demo") != std::string::npos);
  const std::string json = rep.to_json();
  CHECK(json.find("\"bound_name\":\"demo\"") != std::string::npos);
}

TEST_CASE("gen_eig invariants hold at assembled problem sizes") {
  DiscreteModel model = assemble_2d({SplineSpace(3, 10), SplineSpace(3, 10)},
                                    DensityField::named("appendix"),
                                    GeometryMap::named("unit_square"),
                                    {parse_bc("dirichlet"), parse_bc("dirichlet")});
  SymMatrix k = model.stiffness(), m = model.mass();
  GenEigResult r = gen_eig(k, m);
  const double kn = k.frobenius_norm(), mn = m.frobenius_norm();
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    Vec u = r.vectors.column(i);
    Vec resid = k.apply(u);
    axpy(-r.values[i], m.apply(u), resid);
    CHECK(norm2(resid) <= 1e-9 * (kn + std::fabs(r.values[i]) * mn));
    if (i > 0) CHECK(r.values[i - 1] <= r.values[i]);
  }
  // B-orthonormality on a sample of pairs
  Rng rng(151);
  for (int probe = 0; probe < 200; ++probe) {
    const std::size_t i = rng.index(r.values.size());
    const std::size_t j = rng.index(r.values.size());
    const double g = dot(r.vectors.column(i), m.apply(r.vectors.column(j)));
    CHECK(std::fabs(g - (i == j ? 1.0 : 0.0)) < 1e-8);
  }
}
