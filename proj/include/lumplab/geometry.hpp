#pragma once

#include <array>
#include <functional>
#include <string>

#include "lumplab/types.hpp"

namespace lumplab {

/// Map evaluation at a parametric point: physical coordinates, Jacobian
/// columns dF/dxhat_d, and its determinant.
struct GeometryEval {
  std::array<double, 3> x{};
  std::array<std::array<double, 3>, 3> jac{};  ///< jac[i][d] = dx_i / dxhat_d
  double det = 1.0;
};

/// Catalogue of geometry maps F: [0,1]^d -> Omega. The two nontrivial planar
/// domains are fixed biquadratic B-spline control nets (single Bezier patch).
class GeometryMap {
public:
  static GeometryMap named(const std::string& id);

  const std::string& id() const { return id_; }
  std::size_t dim() const { return dim_; }

  GeometryEval eval(const std::array<double, 3>& xhat) const;

  /// True when |det J_F| factors into per-direction univariate weights.
  bool has_separable_weight() const { return separable_; }
  /// Per-direction weight factor; product over directions equals |det J_F|.
  double weight_factor(std::size_t direction, double xhat) const;

private:
  std::string id_;
  std::size_t dim_ = 1;
  bool separable_ = true;
  // biquadratic control net (3 x 3 points), used by the control-net maps
  bool use_net_ = false;
  std::array<std::array<std::array<double, 2>, 3>, 3> net_{};
};

}  // namespace lumplab
