#include "lumplab/newmark.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>

#include "lumplab/pencil.hpp"

namespace lumplab {

NewmarkConfig NewmarkConfig::from_final_time(double beta, double gamma, double final_time,
                                             double dt_target) {
  if (!(dt_target > 0.0) || !(final_time > 0.0))
    throw ConfigError("NewmarkConfig requires positive final time and step");
  NewmarkConfig cfg;
  cfg.beta = beta;
  cfg.gamma = gamma;
  cfg.final_time = final_time;
  cfg.steps = static_cast<std::size_t>(std::ceil(final_time / dt_target - 1e-12));
  if (cfg.steps == 0) cfg.steps = 1;
  cfg.dt = final_time / static_cast<double>(cfg.steps);
  return cfg;
}

Trajectory newmark(const MassOperator& m_like, const SymMatrix& stiffness, const ForcingFn& forcing,
                   const Vec& u0, const Vec& v0, const NewmarkConfig& cfg) {
  const std::size_t n = stiffness.dim();
  if (m_like.dim() != n || u0.size() != n || v0.size() != n)
    throw DimensionMismatch("newmark operand dimensions disagree");
  if (!(cfg.dt > 0.0) || cfg.steps == 0) throw ConfigError("newmark needs dt > 0 and steps >= 1");

  const double dt = cfg.dt;
  const bool expl = cfg.is_explicit();
  // implicit branch factors M + beta dt^2 K once (constant step)
  std::optional<DenseCholesky> lhs;
  if (!expl) {
    SymMatrix shifted = m_like.dense_matrix();
    shifted += (cfg.beta * dt * dt) * stiffness;
    lhs.emplace(shifted);
  }
  auto solve = [&](const Vec& rhs) { return expl ? m_like.solve(rhs) : lhs->solve(rhs); };

  const double blow_up = 1e8 * (norm_inf(u0) + dt * norm_inf(v0) + 1.0);

  Trajectory traj;
  traj.config = cfg;
  traj.u.reserve(cfg.steps + 1);
  traj.v.reserve(cfg.steps + 1);
  traj.a.reserve(cfg.steps + 1);
  traj.u.push_back(u0);
  traj.v.push_back(v0);
  {
    Vec r = forcing(0.0);
    if (r.size() != n) throw DimensionMismatch("forcing vector has wrong dimension");
    axpy(-1.0, stiffness.apply(u0), r);
    traj.a.push_back(m_like.solve(r));
  }

  for (std::size_t s = 0; s < cfg.steps; ++s) {
    const Vec& us = traj.u[s];
    const Vec& vs = traj.v[s];
    const Vec& as = traj.a[s];
    Vec u_pred = us;
    axpy(dt, vs, u_pred);
    axpy((0.5 - cfg.beta) * dt * dt, as, u_pred);
    Vec v_pred = vs;
    axpy((1.0 - cfg.gamma) * dt, as, v_pred);

    Vec rhs = forcing(traj.time(s + 1));
    axpy(-1.0, stiffness.apply(u_pred), rhs);
    Vec a_next = solve(rhs);

    Vec v_next = v_pred;
    axpy(cfg.gamma * dt, a_next, v_next);
    Vec u_next = u_pred;
    if (cfg.beta != 0.0) axpy(cfg.beta * dt * dt, a_next, u_next);

    const double umax = norm_inf(u_next);
    if (!std::isfinite(umax) || umax > blow_up)
      throw UnstableError("time integration diverged", s + 1);

    traj.u.push_back(std::move(u_next));
    traj.v.push_back(std::move(v_next));
    traj.a.push_back(std::move(a_next));
  }
  return traj;
}

Trajectory central_difference(const MassOperator& m_like, const SymMatrix& stiffness,
                              const ForcingFn& forcing, const Vec& u0, const Vec& v0,
                              double final_time, double safety) {
  if (!(safety > 0.0)) throw ConfigError("central_difference requires safety > 0");
  const double dtc = critical_dt(stiffness, m_like);
  NewmarkConfig cfg = NewmarkConfig::from_final_time(0.0, 0.5, final_time, safety * dtc);
  return newmark(m_like, stiffness, forcing, u0, v0, cfg);
}

std::vector<double> transient_l2_series(const DiscreteModel& model, const Trajectory& traj,
                                        const SpaceTimeFn& exact, const Vec& sample_times) {
  if (!traj.u.empty() && traj.u.front().size() != model.n_free())
    throw DimensionMismatch("trajectory does not match the model's free DOF count");
  std::vector<double> errors;
  errors.reserve(sample_times.size());
  for (double t : sample_times) {
    std::size_t s = static_cast<std::size_t>(std::llround(t / traj.config.dt));
    if (s >= traj.states()) s = traj.states() - 1;
    const double ts = traj.time(s);
    errors.push_back(
        l2_error(model, traj.u[s], [&](const std::array<double, 3>& x) { return exact(x, ts); }));
  }
  return errors;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::size_t>& dofs) {
  os << "t";
  for (std::size_t d : dofs) os << ",u" << d;
  os << "\n";
  os.precision(17);
  for (std::size_t s = 0; s < traj.states(); ++s) {
    os << traj.time(s);
    for (std::size_t d : dofs) os << "," << traj.u[s][d];
    os << "\n";
  }
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double x) {
  std::uint64_t v;
  std::memcpy(&v, &x, 8);
  put_u64(os, v);
}

double get_f64(std::istream& is) {
  const std::uint64_t v = get_u64(is);
  double x;
  std::memcpy(&x, &v, 8);
  return x;
}

}  // namespace

void write_trajectory_binary(std::ostream& os, const Trajectory& traj) {
  const std::uint64_t n = traj.u.empty() ? 0 : traj.u.front().size();
  put_u64(os, n);
  put_u64(os, traj.states());
  for (std::size_t s = 0; s < traj.states(); ++s) {
    for (double x : traj.u[s]) put_f64(os, x);
    for (double x : traj.v[s]) put_f64(os, x);
    for (double x : traj.a[s]) put_f64(os, x);
  }
}

Trajectory read_trajectory_binary(std::istream& is) {
  Trajectory traj;
  const std::uint64_t n = get_u64(is);
  const std::uint64_t states = get_u64(is);
  for (std::uint64_t s = 0; s < states; ++s) {
    Vec u(n), v(n), a(n);
    for (double& x : u) x = get_f64(is);
    for (double& x : v) x = get_f64(is);
    for (double& x : a) x = get_f64(is);
    traj.u.push_back(std::move(u));
    traj.v.push_back(std::move(v));
    traj.a.push_back(std::move(a));
  }
  return traj;
}

}  // namespace lumplab
