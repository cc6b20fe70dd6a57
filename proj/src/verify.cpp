#include "lumplab/verify.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "lumplab/experiments.hpp"
#include "lumplab/lumping.hpp"
#include "lumplab/newmark.hpp"
#include "lumplab/nkp.hpp"
#include "lumplab/pencil.hpp"

namespace lumplab::verify {

namespace {

Vec random_vector(Rng& rng, std::size_t n) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

SymMatrix random_spd(Rng& rng, std::size_t n, double shift = 0.5) {
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g(k, i) * g(k, j);
      a.set(i, j, s + (i == j ? shift : 0.0));
    }
  return a;
}

SymMatrix random_symmetric(Rng& rng, std::size_t n, double lo, double hi) {
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a.set(i, j, rng.uniform(lo, hi));
  return a;
}

DiscreteModel model_1d(int p, int m, const char* bc = "dirichlet") {
  return assemble_1d(SplineSpace(p, m), DensityField::constant(),
                     GeometryMap::named("unit_interval"), parse_bc(bc));
}

struct Runner {
  std::vector<CheckResult> results;
  std::uint64_t seed;

  void run(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = body();  // returns "" on success, a message on failure
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  }
};

}  // namespace

std::vector<CheckResult> run_all(std::uint64_t seed) {
  Runner runner;
  runner.seed = seed;

  runner.run("linalg.solver_oracles", [&] {
    Rng rng(seed ^ 0x1);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = 3 + rng.index(8);
      SymMatrix a = random_spd(rng, n);
      Vec b = random_vector(rng, n);
      Vec dense = DenseCholesky(a).solve(b);
      Vec banded = banded_cholesky_solve(BandedSPD::from_dense(a, n - 1), b);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        num += (dense[i] - banded[i]) * (dense[i] - banded[i]);
        den += dense[i] * dense[i];
      }
      if (std::sqrt(num) > 1e-10 * std::sqrt(den)) return std::string("banded vs dense solve");
    }
    return std::string();
  });

  runner.run("linalg.eig_reconstruction", [&] {
    Rng rng(seed ^ 0x2);
    for (std::size_t n : {5ul, 40ul, 90ul}) {
      SymMatrix a = random_symmetric(rng, n, -1.0, 1.0);
      EigResult r = sym_eig(a);
      const double scale = std::max(a.frobenius_norm(), 1.0);
      for (std::size_t k = 0; k < n; ++k) {
        Vec v = r.vectors.column(k);
        Vec res = a.apply(v);
        axpy(-r.values[k], v, res);
        if (norm2(res) > 1e-11 * scale) return std::string("residual too large");
      }
      if (r.orthogonality > 1e-10) return std::string("eigenvector orthogonality");
    }
    return std::string();
  });

  runner.run("pencil.row_sum_spectrum_placement", [&] {
    for (int p = 1; p <= 5; ++p)
      for (int m : {10, 50})
        for (const char* bc : {"dirichlet", "mixed", "none"}) {
          SymMatrix mass = model_1d(p, m, bc).mass();
          Vec vals = gen_eig_values(mass, lump(mass));
          if (!(vals.front() > 0.0)) return std::string("non-positive eigenvalue");
          if (vals.back() > 1.0 + 1e-10) return std::string("spectrum exceeds 1");
          if (std::fabs(vals.back() - 1.0) > 1e-10) return std::string("lambda_max != 1");
        }
    return std::string();
  });

  runner.run("pencil.equivalent_pencils", [&] {
    Rng rng(seed ^ 0x3);
    for (int trial = 0; trial < 8; ++trial) {
      const std::size_t n = 2 + rng.index(5);
      SymMatrix a = random_symmetric(rng, n, -1.0, 1.0);
      SymMatrix b = random_spd(rng, n);
      Matrix f(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) f(i, j) = rng.uniform(-1.0, 1.0);
        f(i, i) += 3.0;
      }
      SymMatrix a2 = SymMatrix::from_general(f.transpose() * a.dense() * f);
      SymMatrix b2 = SymMatrix::from_general(f.transpose() * b.dense() * f);
      Vec s1 = gen_eig_values(a, b), s2 = gen_eig_values(a2, b2);
      for (std::size_t k = 0; k < n; ++k)
        if (std::fabs(s1[k] - s2[k]) > 1e-8 * std::max(std::fabs(s1[k]), 1.0))
          return std::string("congruence changed the spectrum");
    }
    return std::string();
  });

  runner.run("pencil.bauer_fike_crawford", [&] {
    Rng rng(seed ^ 0x4);
    for (int trial = 0; trial < 25; ++trial) {
      SymMatrix a = random_symmetric(rng, 6, -1.0, 1.0);
      SymMatrix b = random_spd(rng, 6, 1.0);
      SymMatrix e = random_symmetric(rng, 6, -0.05, 0.05);
      SymMatrix f = random_symmetric(rng, 6, -0.02, 0.02);
      auto rep = bauer_fike_bounds(Pencil::make(a, b), Pencil::make(a + e, b + f));
      if (!rep.all_hold(1e-10)) return std::string("perturbation bound violated");
    }
    return std::string();
  });

  runner.run("lumping.family_partial_order", [&] {
    Rng rng(seed ^ 0x5);
    SymMatrix b = random_spd(rng, 7);
    Vec prev;
    for (std::size_t i = 1; i <= 7; ++i) {
      Vec vals = gen_eig_values(b, make_Pi(b, i).matrix.dense());
      if (!(vals.front() > 0.0) || vals.back() > 1.0 + 1e-10)
        return std::string("family spectrum outside (0, 1]");
      if (!prev.empty())
        for (std::size_t k = 0; k < vals.size(); ++k)
          if (prev[k] > vals[k] + 1e-10) return std::string("family monotonicity");
      prev = vals;
    }
    return std::string();
  });

  runner.run("lumping.monotone_chain_1d", [&] {
    for (int p : {3, 5}) {
      DiscreteModel model = model_1d(p, 40);
      SymMatrix k = model.stiffness(), m = model.mass();
      Vec prev;
      for (std::size_t i = 1; i <= 3; ++i) {
        Vec cur = gen_eig_values(k, make_Pi(m, i).matrix.dense());
        if (!prev.empty())
          for (std::size_t j = 0; j < cur.size(); ++j)
            if (prev[j] > cur[j] * (1.0 + 1e-10) + 1e-12)
              return std::string("chain not monotone");
        prev = cur;
      }
      Vec exact = gen_eig_values(k, m);
      for (std::size_t j = 0; j < exact.size(); ++j)
        if (prev[j] > exact[j] * (1.0 + 1e-10) + 1e-12)
          return std::string("chain exceeds the consistent spectrum");
    }
    return std::string();
  });

  runner.run("lumping.kron_family_2d", [&] {
    DiscreteModel model =
        assemble_2d({SplineSpace(3, 8), SplineSpace(3, 8)}, DensityField::constant(),
                    GeometryMap::named("unit_square"), {parse_bc("dirichlet"), parse_bc("dirichlet")});
    SymMatrix k = model.stiffness();
    SymMatrix m = model.mass();
    auto factors = model.mass_factors_free();
    Vec prev;
    for (std::size_t i = 1; i <= 3; ++i) {
      Vec cur = gen_eig_values(k, make_Pij(factors, {i, i}).materialize(8192));
      if (!prev.empty())
        for (std::size_t j = 0; j < cur.size(); ++j)
          if (prev[j] > cur[j] * (1.0 + 1e-10) + 1e-12) return std::string("P_ii not monotone");
      prev = cur;
    }
    Vec exact = gen_eig_values(k, m);
    for (std::size_t j = 0; j < exact.size(); ++j)
      if (prev[j] > exact[j] * (1.0 + 1e-10) + 1e-12)
        return std::string("P_33 exceeds the consistent spectrum");
    return std::string();
  });

  runner.run("dynamics.critical_dt_never_shrinks", [&] {
    for (int p : {2, 3, 4}) {
      DiscreteModel model = model_1d(p, 20);
      SymMatrix k = model.stiffness(), m = model.mass();
      const double base = critical_dt(k, m);
      for (std::size_t i = 1; i <= 3; ++i)
        if (critical_dt(k, make_Pi(m, i).matrix.dense()) < base * (1.0 - 1e-10))
          return std::string("lumped operator shrank the critical step");
    }
    return std::string();
  });

  runner.run("dynamics.stability_boundary", [&] {
    SymMatrix k(1);
    k.set(0, 0, 25.0);
    SymMatrix m = SymMatrix::identity(1);
    auto zero = [](double) { return Vec(1, 0.0); };
    const double dtc = 2.0 / 5.0;
    NewmarkConfig stable;
    stable.beta = 0.0;
    stable.gamma = 0.5;
    stable.dt = 0.999 * dtc;
    stable.steps = 100000;
    stable.final_time = stable.dt * 100000;
    try {
      newmark(MassOperator::dense(m), k, zero, {1.0}, {0.0}, stable);
    } catch (const UnstableError&) {
      return std::string("stable run diverged");
    }
    NewmarkConfig unstable = stable;
    unstable.dt = 1.001 * dtc;
    unstable.final_time = unstable.dt * 100000;
    try {
      newmark(MassOperator::dense(m), k, zero, {1.0}, {0.0}, unstable);
      return std::string("unstable run stayed bounded");
    } catch (const UnstableError&) {
    }
    return std::string();
  });

  runner.run("nkp.isometry_and_error_identity", [&] {
    Rng rng(seed ^ 0x6);
    DiscreteModel model =
        assemble_2d({SplineSpace(2, 5), SplineSpace(2, 5)}, DensityField::named("appendix"),
                    GeometryMap::named("unit_square"), {parse_bc("dirichlet"), parse_bc("dirichlet")});
    SymMatrix m = model.mass();
    const std::size_t nf = model.free_per_dir[0].size();
    Rearranged r = rearrange(m, nf, nf);
    if (std::fabs(r.matrix.frobenius_norm() - m.frobenius_norm()) > 1e-12 * m.frobenius_norm())
      return std::string("rearrangement is not isometric");
    NkpResult res = nkp_rank1(m, nf, nf);
    SymMatrix approx = kron_product(res.factors[0], res.factors[1]);
    double tail = 0.0;
    for (std::size_t i = 1; i < res.singular_values.size(); ++i)
      tail += res.singular_values[i] * res.singular_values[i];
    if (std::fabs((approx - m).frobenius_norm() - std::sqrt(tail)) >
        1e-10 * std::max(std::sqrt(tail), 1e-30))
      return std::string("error identity violated");
    auto hw = hoffman_wielandt_check(m, approx);
    if (hw.first > hw.second * (1.0 + 1e-10)) return std::string("Hoffman-Wielandt violated");
    return std::string();
  });

  runner.run("nkp.cond_bound_rank2", [&] {
    DiscreteModel model =
        assemble_2d({SplineSpace(2, 6), SplineSpace(2, 6)}, DensityField::constant(),
                    GeometryMap::named("stretched_square"),
                    {parse_bc("dirichlet"), parse_bc("dirichlet")});
    SymMatrix m = model.mass();
    const std::size_t nf = model.free_per_dir[0].size();
    KronOperator op = nkp_rank_r(m, nf, nf, 2);
    CondBound cb = cond_bound(op);
    if (!cb.applicable) return std::string("delta >= 1 on the rank-2 geometry");
    if (cb.kappa > cb.bound + 1e-8) return std::string("condition bound violated");
    return std::string();
  });

  runner.run("cli.deterministic_outputs", [&] {
    const std::string cfg_text = R"({
      "experiment": "spectrum",
      "discretization": {"degrees": [2], "subdivisions": [12], "geometry": "unit_interval",
                          "density": "constant", "bc": ["dirichlet"]},
      "operators": ["M", "P1", "P2"],
      "seed": 7
    })";
    ExperimentConfig cfg = ExperimentConfig::from_json_text(cfg_text);
    namespace fs = std::filesystem;
    const fs::path dir1 = fs::temp_directory_path() / "lumplab_det_a";
    const fs::path dir2 = fs::temp_directory_path() / "lumplab_det_b";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    fs::create_directories(dir1);
    fs::create_directories(dir2);
    run_spectrum_experiment(cfg, dir1.string());
    run_spectrum_experiment(cfg, dir2.string());
    for (const char* f : {"spectrum.csv", "summary.json", "ratio_P1.csv", "ratio_P2.csv"}) {
      std::ifstream a(dir1 / f), b(dir2 / f);
      std::stringstream sa, sb;
      sa << a.rdbuf();
      sb << b.rdbuf();
      if (sa.str().empty() || sa.str() != sb.str())
        return std::string("outputs differ for ") + f;
    }
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    return std::string();
  });

  return runner.results;
}

bool report(const std::vector<CheckResult>& results, std::ostream& os) {
  bool all = true;
  for (const auto& r : results) {
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.passed) os << " -- " << r.detail;
    os << "\n";
    all = all && r.passed;
  }
  os << (all ? "verify: all checks passed" : "verify: FAILURES present") << "\n";
  return all;
}

}  // namespace lumplab::verify
