#pragma once

#include "lumplab/types.hpp"

namespace lumplab {

/// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
  Vec points;
  Vec weights;
};

GaussRule gauss_legendre(std::size_t npoints);

/// Univariate B-spline space of degree p on [0,1] with m uniform subdivisions,
/// open knot vector and maximal C^{p-1} smoothness; dim = m + p.
class SplineSpace {
public:
  SplineSpace(int degree, int subdivisions);

  int degree() const { return p_; }
  int subdivisions() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_ + p_); }
  const Vec& knots() const { return knots_; }

  /// Values and first derivatives of the p+1 basis functions active at x;
  /// `first` is the index of the first active function.
  struct BasisValues {
    std::size_t first;
    Vec values;
    Vec derivs;
  };

  BasisValues eval(double x) const;  ///< throws if x is outside [0, 1]
  /// Evaluation forced onto a given knot span (for one-sided limits at knots).
  BasisValues eval_on_span(std::size_t span, double x) const;

  std::size_t find_span(double x) const;
  /// Element breakpoints 0 = b_0 < ... < b_m = 1.
  double breakpoint(std::size_t e) const;

  Vec eval_all(double x) const;         ///< dense vector of all basis values
  Vec eval_all_derivs(double x) const;

private:
  int p_, m_;
  Vec knots_;
};

}  // namespace lumplab
