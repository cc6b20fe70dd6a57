#pragma once

#include <functional>
#include <iosfwd>

#include "lumplab/assemble.hpp"
#include "lumplab/mass_operator.hpp"

namespace lumplab {

struct NewmarkConfig {
  double beta = 0.0;
  double gamma = 0.5;
  double dt = 0.0;
  std::size_t steps = 0;     ///< N
  double final_time = 0.0;   ///< T = N dt

  bool is_explicit() const { return beta == 0.0; }
  bool unconditionally_stable() const { return beta >= 0.5 * gamma && gamma >= 0.5; }

  /// N = ceil(T / dt_target), then dt = T / N so the final time is hit exactly.
  static NewmarkConfig from_final_time(double beta, double gamma, double final_time,
                                       double dt_target);
};

/// Per-step states; u/v/a have steps+1 entries, times t_s = s dt.
struct Trajectory {
  NewmarkConfig config;
  std::vector<Vec> u, v, a;

  std::size_t states() const { return u.size(); }
  double time(std::size_t s) const { return static_cast<double>(s) * config.dt; }
};

using ForcingFn = std::function<Vec(double)>;

/// Newmark time stepping with the mass matrix replaced by `m_like`:
///   a_0 = M~^{-1} (f(t_0) - K u_0)
///   predictors  u~ = u + dt v + (1/2 - beta) dt^2 a,  v~ = v + (1 - gamma) dt a
///   a_{s+1} = (M~ + beta dt^2 K)^{-1} (f(t_{s+1}) - K u~)
///   correctors v = v~ + gamma dt a_{s+1},  u = u~ + beta dt^2 a_{s+1}
/// Throws UnstableError when the displacement blows up or goes non-finite.
Trajectory newmark(const MassOperator& m_like, const SymMatrix& stiffness, const ForcingFn& forcing,
                   const Vec& u0, const Vec& v0, const NewmarkConfig& cfg);

/// Central difference (beta = 0, gamma = 1/2) with
/// dt = safety * critical_dt(K, M~) adjusted so N dt = final_time.
Trajectory central_difference(const MassOperator& m_like, const SymMatrix& stiffness,
                              const ForcingFn& forcing, const Vec& u0, const Vec& v0,
                              double final_time, double safety);

using SpaceTimeFn = std::function<double(const std::array<double, 3>&, double)>;

/// L2 errors at the trajectory step nearest to each sample time.
std::vector<double> transient_l2_series(const DiscreteModel& model, const Trajectory& traj,
                                        const SpaceTimeFn& exact, const Vec& sample_times);

/// CSV export: t plus the selected DOF values per step.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::size_t>& dofs);

/// Binary dump, little-endian: u64 n, u64 N (stored states), then N blocks of
/// u, v, a as n doubles each.
void write_trajectory_binary(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_binary(std::istream& is);

}  // namespace lumplab
