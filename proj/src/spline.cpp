#include "lumplab/spline.hpp"

#include <cmath>

namespace lumplab {

GaussRule gauss_legendre(std::size_t npoints) {
  if (npoints == 0) throw std::invalid_argument("gauss_legendre needs at least one point");
  GaussRule rule;
  rule.points.resize(npoints);
  rule.weights.resize(npoints);
  const std::size_t half = (npoints + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Newton iteration from the Chebyshev estimate of the i-th root.
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(npoints) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < npoints; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * static_cast<double>(j) + 1.0) * x * p1 - static_cast<double>(j) * p2) /
             (static_cast<double>(j) + 1.0);
      }
      pp = static_cast<double>(npoints) * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    rule.points[i] = -x;
    rule.points[npoints - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[npoints - 1 - i] = w;
  }
  return rule;
}

SplineSpace::SplineSpace(int degree, int subdivisions) : p_(degree), m_(subdivisions) {
  if (p_ < 1) throw std::invalid_argument("SplineSpace requires degree >= 1");
  if (m_ < 1) throw std::invalid_argument("SplineSpace requires at least one subdivision");
  knots_.reserve(static_cast<std::size_t>(m_ + 2 * p_ + 1));
  for (int i = 0; i <= p_; ++i) knots_.push_back(0.0);
  for (int i = 1; i < m_; ++i) knots_.push_back(static_cast<double>(i) / m_);
  for (int i = 0; i <= p_; ++i) knots_.push_back(1.0);
}

std::size_t SplineSpace::find_span(double x) const {
  const std::size_t n = dim();
  if (x >= 1.0) return n - 1;
  // uniform interior knots: span = p + floor(x * m), clamped
  std::size_t e = static_cast<std::size_t>(x * m_);
  if (e >= static_cast<std::size_t>(m_)) e = m_ - 1;
  std::size_t span = static_cast<std::size_t>(p_) + e;
  while (x < knots_[span]) --span;
  while (x >= knots_[span + 1] && span < n - 1) ++span;
  return span;
}

double SplineSpace::breakpoint(std::size_t e) const {
  return static_cast<double>(e) / static_cast<double>(m_);
}

SplineSpace::BasisValues SplineSpace::eval(double x) const {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("SplineSpace::eval outside [0, 1]");
  return eval_on_span(find_span(x), x);
}

// Values and first derivatives of the nonzero basis functions on one span,
// the usual triangular recurrence over knot differences.
SplineSpace::BasisValues SplineSpace::eval_on_span(std::size_t span, double x) const {
  const std::size_t p = static_cast<std::size_t>(p_);
  std::vector<Vec> ndu(p + 1, Vec(p + 1, 0.0));
  Vec left(p + 1, 0.0), right(p + 1, 0.0);
  ndu[0][0] = 1.0;
  for (std::size_t j = 1; j <= p; ++j) {
    left[j] = x - knots_[span + 1 - j];
    right[j] = knots_[span + j] - x;
    double saved = 0.0;
    for (std::size_t r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }

  BasisValues out;
  out.first = span - p;
  out.values.resize(p + 1);
  out.derivs.assign(p + 1, 0.0);
  for (std::size_t j = 0; j <= p; ++j) out.values[j] = ndu[j][p];

  // first derivative from the degree p-1 functions
  if (p >= 1) {
    for (std::size_t r = 0; r <= p; ++r) {
      double d = 0.0;
      if (r >= 1) {
        d += ndu[r - 1][p - 1] / ndu[p][r - 1];
      }
      if (r <= p - 1) {
        d -= ndu[r][p - 1] / ndu[p][r];
      }
      out.derivs[r] = static_cast<double>(p) * d;
    }
  }
  return out;
}

Vec SplineSpace::eval_all(double x) const {
  Vec out(dim(), 0.0);
  BasisValues b = eval(x);
  for (std::size_t j = 0; j < b.values.size(); ++j) out[b.first + j] = b.values[j];
  return out;
}

Vec SplineSpace::eval_all_derivs(double x) const {
  Vec out(dim(), 0.0);
  BasisValues b = eval(x);
  for (std::size_t j = 0; j < b.derivs.size(); ++j) out[b.first + j] = b.derivs[j];
  return out;
}

}  // namespace lumplab
