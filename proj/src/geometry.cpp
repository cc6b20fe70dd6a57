#include "lumplab/geometry.hpp"

#include <cmath>

namespace lumplab {

namespace {

void bernstein2(double t, double* b, double* db) {
  b[0] = (1.0 - t) * (1.0 - t);
  b[1] = 2.0 * t * (1.0 - t);
  b[2] = t * t;
  db[0] = -2.0 * (1.0 - t);
  db[1] = 2.0 - 4.0 * t;
  db[2] = 2.0 * t;
}

constexpr double kG[3] = {0.0, 0.5, 1.0};

}  // namespace

GeometryMap GeometryMap::named(const std::string& id) {
  GeometryMap g;
  g.id_ = id;
  if (id == "unit_interval") {
    g.dim_ = 1;
    g.separable_ = true;
  } else if (id == "unit_square") {
    g.dim_ = 2;
    g.separable_ = true;
  } else if (id == "unit_cube") {
    g.dim_ = 3;
    g.separable_ = true;
  } else if (id == "quarter_annulus") {
    g.dim_ = 2;
    g.separable_ = true;  // |det J| = (pi/2)(1 + xi)
  } else if (id == "stretched_square") {
    // F(xi, eta) = (xi + xi eta / 2, eta + xi eta / 2); the bilinear terms are
    // exact in the biquadratic Bernstein basis with Greville coefficients.
    g.dim_ = 2;
    g.separable_ = false;
    g.use_net_ = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double cross = 0.5 * kG[i] * kG[j];
        g.net_[i][j] = {kG[i] + cross, kG[j] + cross};
      }
  } else if (id == "reentrant_corner") {
    // square deformed by a parabolic notch in the eta = 1 edge
    g.dim_ = 2;
    g.separable_ = false;
    g.use_net_ = true;
    const double ys[3][3] = {{0.0, 1.0, 2.0}, {0.0, 0.8, 0.6}, {0.0, 1.0, 2.0}};
    const double xs[3] = {0.0, 1.0, 2.0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g.net_[i][j] = {xs[i], ys[i][j]};
  } else {
    throw ConfigError("unknown geometry id: " + id);
  }
  return g;
}

GeometryEval GeometryMap::eval(const std::array<double, 3>& xhat) const {
  GeometryEval e;
  if (id_ == "unit_interval") {
    e.x = {xhat[0], 0.0, 0.0};
    e.jac[0][0] = 1.0;
    e.det = 1.0;
  } else if (id_ == "unit_square") {
    e.x = {xhat[0], xhat[1], 0.0};
    e.jac[0][0] = 1.0;
    e.jac[1][1] = 1.0;
    e.det = 1.0;
  } else if (id_ == "unit_cube") {
    e.x = xhat;
    e.jac[0][0] = e.jac[1][1] = e.jac[2][2] = 1.0;
    e.det = 1.0;
  } else if (id_ == "quarter_annulus") {
    const double r = 1.0 + xhat[0];
    const double th = 0.5 * M_PI * xhat[1];
    const double c = std::cos(th), s = std::sin(th);
    e.x = {r * c, r * s, 0.0};
    e.jac[0][0] = c;
    e.jac[1][0] = s;
    e.jac[0][1] = -r * 0.5 * M_PI * s;
    e.jac[1][1] = r * 0.5 * M_PI * c;
    e.det = 0.5 * M_PI * r;
  } else {
    double bx[3], dbx[3], by[3], dby[3];
    bernstein2(xhat[0], bx, dbx);
    bernstein2(xhat[1], by, dby);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        for (int c = 0; c < 2; ++c) {
          e.x[c] += net_[i][j][c] * bx[i] * by[j];
          e.jac[c][0] += net_[i][j][c] * dbx[i] * by[j];
          e.jac[c][1] += net_[i][j][c] * bx[i] * dby[j];
        }
      }
    e.det = e.jac[0][0] * e.jac[1][1] - e.jac[0][1] * e.jac[1][0];
  }
  return e;
}

double GeometryMap::weight_factor(std::size_t direction, double xhat) const {
  if (!separable_) throw ConfigError("geometry weight is not separable: " + id_);
  if (id_ == "quarter_annulus" && direction == 0) return 0.5 * M_PI * (1.0 + xhat);
  return 1.0;
}

}  // namespace lumplab
