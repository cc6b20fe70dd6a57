#pragma once

#include <functional>
#include <optional>

#include "lumplab/geometry.hpp"
#include "lumplab/matrix.hpp"
#include "lumplab/spline.hpp"

namespace lumplab {

/// Density over the physical domain. The catalogue entries evaluate a closed
/// form; tabulated densities carry one sample per (flattened) quadrature point.
class DensityField {
public:
  static DensityField constant(double value = 1.0);
  static DensityField named(const std::string& id);  ///< "constant" | "appendix"
  static DensityField tabulated(Vec samples);

  double value(const std::array<double, 3>& physical, std::size_t qp_index) const;
  bool separable() const { return separable_; }
  const std::string& id() const { return id_; }

private:
  std::string id_;
  bool separable_ = true;
  double constant_ = 1.0;
  Vec samples_;
};

/// Dirichlet flags per parametric direction end; true means the boundary
/// basis function is eliminated.
struct DirectionBc {
  bool left = false;
  bool right = false;
};

/// "dirichlet" -> both ends, "mixed" -> left only, "none" -> no elimination.
DirectionBc parse_bc(const std::string& id);

/// Assembled Galerkin discretization. Full-index matrices are kept alongside
/// the per-direction free index sets; `mass()`/`stiffness()` return the
/// Dirichlet-eliminated operators.
struct DiscreteModel {
  std::vector<SplineSpace> spaces;
  GeometryMap geometry;
  DensityField density;
  std::vector<DirectionBc> bcs;

  SymMatrix mass_full;
  SymMatrix stiffness_full;

  bool kron_flag = false;
  std::vector<SymMatrix> mass_factors;  ///< full per-direction factors when kron_flag

  std::vector<std::vector<std::size_t>> free_per_dir;
  std::vector<std::size_t> free_dofs;  ///< global indices, direction-major order

  std::size_t n_full() const { return mass_full.dim(); }
  std::size_t n_free() const { return free_dofs.size(); }
  SymMatrix mass() const { return mass_full.restricted(free_dofs); }
  SymMatrix stiffness() const { return stiffness_full.restricted(free_dofs); }
  std::vector<SymMatrix> mass_factors_free() const;

  /// Embeds free-DOF coefficients into the full index set (zeros elsewhere).
  Vec embed(const Vec& coeffs_free) const;
};

DiscreteModel assemble_1d(const SplineSpace& space, const DensityField& density,
                          const GeometryMap& geometry, const DirectionBc& bc);

DiscreteModel assemble_2d(const std::vector<SplineSpace>& spaces, const DensityField& density,
                          const GeometryMap& geometry, const std::vector<DirectionBc>& bcs);

/// Separable unit cube, constant density.
DiscreteModel assemble_3d(const std::vector<SplineSpace>& spaces, const DensityField& density,
                          const std::vector<DirectionBc>& bcs);

/// Tensor-quadrature mass assembly ignoring any separable structure; used as
/// the independent route when cross-checking the Kronecker path.
SymMatrix assemble_full_mass_2d(const std::vector<SplineSpace>& spaces,
                                const DensityField& density, const GeometryMap& geometry);

/// integral of rho |det J_F| over the parametric domain (total mass).
double total_mass(const DiscreteModel& model);

/// First exact eigenfrequency of the catalogued model problems.
double exact_eigenfrequency(const std::string& problem_id);

using SpatialFn = std::function<double(const std::array<double, 3>&)>;

/// Gauss-quadrature L2 norm of (u_h - exact) over the physical domain;
/// `coeffs_free` lives on the free DOFs.
double l2_error(const DiscreteModel& model, const Vec& coeffs_free, const SpatialFn& exact);

/// L2 load vector over the full index set, f_i = int exact B_i rho_like |det J|.
Vec l2_load(const DiscreteModel& model, const SpatialFn& fn);

/// L2 projection of a function onto the free-DOF space (consistent mass solve).
Vec l2_project(const DiscreteModel& model, const SpatialFn& fn);

}  // namespace lumplab
