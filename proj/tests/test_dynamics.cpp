#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lumplab/lumping.hpp"
#include "lumplab/newmark.hpp"
#include "lumplab/pencil.hpp"
#include "oracles.hpp"

using namespace lumplab;

namespace {

MassOperator scalar_mass(double m) {
  SymMatrix mm(1);
  mm.set(0, 0, m);
  return MassOperator::dense(mm);
}

ForcingFn zero_forcing(std::size_t n) {
  return [n](double) { return Vec(n, 0.0); };
}

/// Exact solution of the scalar central-difference recurrence for
/// u'' + w^2 u = 0, u(0) = A, v(0) = 0: u_s = A cos(s Omega) with
/// cos(Omega) = 1 - (w dt)^2 / 2.
double discrete_cosine_solution(double w, double dt, std::size_t s, double amplitude) {
  const double c = 1.0 - 0.5 * w * w * dt * dt;
  const double omega = std::acos(std::max(-1.0, std::min(1.0, c)));
  return amplitude * std::cos(static_cast<double>(s) * omega);
}

}  // namespace

TEST_CASE("NewmarkConfig flags and step convention") {
  NewmarkConfig cfg = NewmarkConfig::from_final_time(0.0, 0.5, 2.0, 0.3);
  CHECK(cfg.steps == 7);
  CHECK(cfg.dt * static_cast<double>(cfg.steps) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cfg.is_explicit());
  CHECK(!cfg.unconditionally_stable());

  NewmarkConfig avg = NewmarkConfig::from_final_time(0.25, 0.5, 1.0, 0.1);
  CHECK(!avg.is_explicit());
  CHECK(avg.unconditionally_stable());

  NewmarkConfig partial = NewmarkConfig::from_final_time(0.2, 0.5, 1.0, 0.1);
  CHECK(!partial.unconditionally_stable());
}

TEST_CASE("free motion: m = 1, k = 0 gives u_s = s dt exactly") {
  SymMatrix k(1);  // zero stiffness
  NewmarkConfig cfg = NewmarkConfig::from_final_time(0.0, 0.5, 1.0, 0.1);
  Trajectory t = newmark(scalar_mass(1.0), k, zero_forcing(1), {0.0}, {1.0}, cfg);
  for (std::size_t s = 0; s < t.states(); ++s)
    CHECK(t.u[s][0] == doctest::Approx(t.time(s)).epsilon(1e-14));
}

TEST_CASE("scalar oscillator matches the exact discrete recurrence") {
  const double w = 3.0;
  SymMatrix k(1);
  k.set(0, 0, w * w);
  const double dt = 0.9 * 2.0 / w;
  NewmarkConfig cfg;
  cfg.beta = 0.0;
  cfg.gamma = 0.5;
  cfg.dt = dt;
  cfg.steps = 10000;
  cfg.final_time = dt * 10000;
  Trajectory t = newmark(scalar_mass(1.0), k, zero_forcing(1), {1.0}, {0.0}, cfg);
  for (std::size_t s : {10ul, 100ul, 5000ul, 10000ul})
    CHECK(t.u[s][0] ==
          doctest::Approx(discrete_cosine_solution(w, dt, s, 1.0)).epsilon(1e-8).scale(1.0));
  double umax = 0.0;
  for (std::size_t s = 0; s < t.states(); ++s) umax = std::max(umax, std::fabs(t.u[s][0]));
  CHECK(umax <= 1.01 * 1.0 / std::sqrt(1.0 - std::pow(w * dt / 2.0, 2)));
}

TEST_CASE("stability boundary is sharp at 0.1 percent") {
  const double w = 5.0;
  SymMatrix k(1);
  k.set(0, 0, w * w);
  const double dtc = 2.0 / w;

  NewmarkConfig stable;
  stable.beta = 0.0;
  stable.gamma = 0.5;
  stable.dt = 0.999 * dtc;
  stable.steps = 100000;
  stable.final_time = stable.dt * 100000;
  CHECK_NOTHROW(newmark(scalar_mass(1.0), k, zero_forcing(1), {1.0}, {0.0}, stable));

  NewmarkConfig unstable = stable;
  unstable.dt = 1.001 * dtc;
  unstable.steps = 100000;
  unstable.final_time = unstable.dt * 100000;
  bool blew_up = false;
  std::size_t at_step = 0;
  try {
    newmark(scalar_mass(1.0), k, zero_forcing(1), {1.0}, {0.0}, unstable);
  } catch (const UnstableError& e) {
    blew_up = true;
    at_step = e.step();
  }
  CHECK(blew_up);
  CHECK(at_step > 0);

  // well past the limit the blow-up is quick
  NewmarkConfig fast = stable;
  fast.dt = 1.2 * dtc;
  fast.steps = 200;
  fast.final_time = fast.dt * 200;
  CHECK_THROWS_AS(newmark(scalar_mass(1.0), k, zero_forcing(1), {1.0}, {0.0}, fast),
                  UnstableError);
}

TEST_CASE("second-order accuracy of central differences") {
  const double w = 2.0;
  SymMatrix k(1);
  k.set(0, 0, w * w);
  const double T = 2.0;
  Vec hs, errs;
  for (double dt0 : {0.02, 0.01, 0.005, 0.0025}) {
    NewmarkConfig cfg = NewmarkConfig::from_final_time(0.0, 0.5, T, dt0);
    Trajectory t = newmark(scalar_mass(1.0), k, zero_forcing(1), {1.0}, {0.0}, cfg);
    hs.push_back(cfg.dt);
    errs.push_back(std::fabs(t.u.back()[0] - std::cos(w * T)));
  }
  const double slope = oracle::loglog_slope(hs, errs);
  CHECK(slope > 1.8);
  CHECK(slope < 2.2);
}

TEST_CASE("implicit average-acceleration branch is stable beyond dt_c") {
  const double w = 10.0;
  SymMatrix k(1);
  k.set(0, 0, w * w);
  NewmarkConfig cfg = NewmarkConfig::from_final_time(0.25, 0.5, 20.0, 10.0 * 2.0 / w);
  Trajectory t = newmark(scalar_mass(1.0), k, zero_forcing(1), {1.0}, {0.0}, cfg);
  for (std::size_t s = 0; s < t.states(); ++s) CHECK(std::fabs(t.u[s][0]) <= 1.0 + 1e-9);
}

TEST_CASE("central_difference trivial step count") {
  Rng rng(503);
  SymMatrix m = oracle::random_spd(rng, 4);
  Trajectory t = central_difference(MassOperator::dense(m), m, zero_forcing(4), Vec(4, 0.0),
                                    Vec(4, 0.0), 2.0, 1.0);
  CHECK(t.config.steps == 1);  // dt_c = 2 when K = M
  CHECK(t.config.dt == doctest::Approx(2.0));
}

TEST_CASE("banded and Kronecker mass operators agree with the dense path") {
  Rng rng(509);
  SymMatrix kb = oracle::random_banded_spd(rng, 6, 2);
  SymMatrix mb = oracle::random_banded_spd(rng, 6, 1);
  Vec u0 = oracle::random_vector(rng, 6), v0 = oracle::random_vector(rng, 6);
  NewmarkConfig cfg = NewmarkConfig::from_final_time(0.0, 0.5, 0.5, 0.01);
  Trajectory td = newmark(MassOperator::dense(mb), kb, zero_forcing(6), u0, v0, cfg);
  Trajectory tb = newmark(MassOperator::banded(BandedSPD::from_dense(mb, 1)), kb, zero_forcing(6),
                          u0, v0, cfg);
  CHECK(oracle::rel_err(tb.u.back(), td.u.back()) < 1e-10);

  SymMatrix f1 = oracle::random_spd(rng, 2), f2 = oracle::random_spd(rng, 3);
  auto kop = KronOperator::single({f1, f2});
  SymMatrix kk = oracle::random_spd(rng, 6);
  Vec w0 = oracle::random_vector(rng, 6);
  Trajectory tk = newmark(MassOperator::kron(kop), kk, zero_forcing(6), w0, Vec(6, 0.0), cfg);
  Trajectory tkd = newmark(MassOperator::dense(kop.materialize()), kk, zero_forcing(6), w0,
                           Vec(6, 0.0), cfg);
  CHECK(oracle::rel_err(tk.u.back(), tkd.u.back()) < 1e-10);
}

TEST_CASE("1D elastodynamics: transient errors and operator ordering") {
  DiscreteModel model = assemble_1d(SplineSpace(4, 50), DensityField::constant(),
                                    GeometryMap::named("unit_interval"), parse_bc("dirichlet"));
  SymMatrix k = model.stiffness();
  SymMatrix m = model.mass();
  const std::size_t n = model.n_free();
  Vec u0 = l2_project(model, [](const std::array<double, 3>& x) {
    return std::sin(4.0 * M_PI * x[0]);
  });
  auto exact = [](const std::array<double, 3>& x, double t) {
    return std::sin(4.0 * M_PI * x[0]) * std::cos(4.0 * M_PI * t);
  };
  const double dt = 0.85 * critical_dt(k, m);
  NewmarkConfig cfg = NewmarkConfig::from_final_time(0.0, 0.5, 5.0, dt);

  Trajectory tm = newmark(MassOperator::dense(m), k, zero_forcing(n), u0, Vec(n, 0.0), cfg);

  // exact = the discrete solution itself gives a zero error series
  const std::size_t probe_step = tm.states() / 2;
  Vec full = model.embed(tm.u[probe_step]);
  auto discrete_fn = [&](const std::array<double, 3>& x, double) {
    Vec basis = model.spaces[0].eval_all(x[0]);
    return dot(basis, full);
  };
  const double self_err =
      transient_l2_series(model, tm, discrete_fn, {tm.time(probe_step)}).front();
  CHECK(self_err < 1e-12);

  std::vector<double> err_m = transient_l2_series(model, tm, exact, {1.0, 5.0});
  CHECK(err_m[0] < 5e-3);  // consistent mass at t = 1

  Vec errs_at_5;
  for (std::size_t i : {1ul, 2ul, 3ul}) {
    auto pi = make_Pi(m, i);
    Trajectory tp = newmark(MassOperator::banded(pi.matrix), k, zero_forcing(n), u0, Vec(n, 0.0),
                            cfg);
    errs_at_5.push_back(transient_l2_series(model, tp, exact, {5.0}).front());
  }
  CHECK(errs_at_5[2] <= errs_at_5[1]);
  CHECK(errs_at_5[1] <= errs_at_5[0]);
}

TEST_CASE("lumped substitution never shrinks the stable step") {
  for (int p : {2, 3}) {
    DiscreteModel model = assemble_1d(SplineSpace(p, 15), DensityField::constant(),
                                      GeometryMap::named("unit_interval"), parse_bc("dirichlet"));
    SymMatrix k = model.stiffness(), m = model.mass();
    const double base = critical_dt(k, m);
    for (std::size_t i = 1; i <= 3; ++i) {
      const double dtc = critical_dt(k, make_Pi(m, i).matrix.dense());
      CHECK(dtc >= base - 1e-10 * base);
    }
  }
}

TEST_CASE("exact-solution reproduction under simultaneous refinement") {
  auto exact = [](const std::array<double, 3>& x, double t) {
    return std::sin(4.0 * M_PI * x[0]) * std::cos(4.0 * M_PI * t);
  };
  double prev_err = 1e9;
  for (int m : {20, 40}) {
    DiscreteModel model = assemble_1d(SplineSpace(3, m), DensityField::constant(),
                                      GeometryMap::named("unit_interval"), parse_bc("dirichlet"));
    SymMatrix k = model.stiffness();
    Trajectory t = central_difference(MassOperator::dense(model.mass()), k,
                                      zero_forcing(model.n_free()),
                                      l2_project(model, [](const std::array<double, 3>& x) {
                                        return std::sin(4.0 * M_PI * x[0]);
                                      }),
                                      Vec(model.n_free(), 0.0), 1.0, 0.5);
    const double err = transient_l2_series(model, t, exact, {1.0}).front();
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-3);
}

TEST_CASE("trajectory exports") {
  SymMatrix k(2);
  k.set(0, 0, 1.0);
  k.set(1, 1, 2.0);
  SymMatrix m = SymMatrix::identity(2);
  NewmarkConfig cfg = NewmarkConfig::from_final_time(0.0, 0.5, 0.2, 0.1);
  Trajectory t = newmark(MassOperator::dense(m), k, zero_forcing(2), {1.0, 0.5}, {0.0, 0.0}, cfg);

  std::ostringstream csv;
  write_trajectory_csv(csv, t, {0, 1});
  CHECK(csv.str().rfind("t,u0,u1\n", 0) == 0);

  std::ostringstream bin(std::ios::binary);
  write_trajectory_binary(bin, t);
  CHECK(bin.str().size() == 16 + t.states() * 3 * 2 * 8);
  std::istringstream in(bin.str());
  Trajectory back = read_trajectory_binary(in);
  REQUIRE(back.states() == t.states());
  for (std::size_t s = 0; s < t.states(); ++s) {
    CHECK(back.u[s] == t.u[s]);
    CHECK(back.v[s] == t.v[s]);
    CHECK(back.a[s] == t.a[s]);
  }
}
