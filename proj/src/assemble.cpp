#include "lumplab/assemble.hpp"

#include <cmath>

#include "lumplab/eig.hpp"
#include "lumplab/kron.hpp"

namespace lumplab {

DensityField DensityField::constant(double value) {
  DensityField d;
  d.id_ = "constant";
  d.separable_ = true;
  d.constant_ = value;
  return d;
}

DensityField DensityField::named(const std::string& id) {
  if (id == "constant") return constant(1.0);
  if (id == "appendix") {
    DensityField d;
    d.id_ = "appendix";
    d.separable_ = false;
    return d;
  }
  throw ConfigError("unknown density id: " + id);
}

DensityField DensityField::tabulated(Vec samples) {
  DensityField d;
  d.id_ = "tabulated";
  d.separable_ = false;
  d.samples_ = std::move(samples);
  return d;
}

double DensityField::value(const std::array<double, 3>& x, std::size_t qp_index) const {
  if (id_ == "constant") return constant_;
  if (id_ == "appendix") return std::fabs(std::sin(x[0] * x[1])) + x[0] + x[1] + 1.0;
  if (qp_index >= samples_.size()) throw DimensionMismatch("tabulated density sample out of range");
  return samples_[qp_index];
}

DirectionBc parse_bc(const std::string& id) {
  if (id == "dirichlet") return {true, true};
  if (id == "mixed") return {true, false};
  if (id == "none") return {false, false};
  throw ConfigError("unknown boundary condition id: " + id);
}

namespace {

/// Per-direction quadrature layout: p+1 Gauss points per element, with the
/// active basis values cached at every point.
struct QuadLayout {
  Vec x;                                        ///< parametric points
  Vec w;                                        ///< weights including element jacobian
  std::vector<SplineSpace::BasisValues> basis;  ///< at each point
  std::size_t per_element;
};

QuadLayout build_quadrature(const SplineSpace& space) {
  const std::size_t npts = static_cast<std::size_t>(space.degree()) + 1;
  GaussRule rule = gauss_legendre(npts);
  QuadLayout q;
  q.per_element = npts;
  const std::size_t m = static_cast<std::size_t>(space.subdivisions());
  q.x.reserve(m * npts);
  q.w.reserve(m * npts);
  for (std::size_t e = 0; e < m; ++e) {
    const double a = space.breakpoint(e), b = space.breakpoint(e + 1);
    for (std::size_t k = 0; k < npts; ++k) {
      q.x.push_back(0.5 * (b - a) * rule.points[k] + 0.5 * (a + b));
      q.w.push_back(0.5 * (b - a) * rule.weights[k]);
    }
  }
  q.basis.reserve(q.x.size());
  for (double xv : q.x) q.basis.push_back(space.eval(xv));
  return q;
}

std::vector<std::size_t> free_indices(std::size_t n, const DirectionBc& bc) {
  std::vector<std::size_t> idx;
  idx.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 && bc.left) continue;
    if (i + 1 == n && bc.right) continue;
    idx.push_back(i);
  }
  return idx;
}

void build_free_dofs(DiscreteModel& model) {
  model.free_per_dir.clear();
  std::vector<std::size_t> dims;
  for (const auto& s : model.spaces) dims.push_back(s.dim());
  for (std::size_t d = 0; d < dims.size(); ++d)
    model.free_per_dir.push_back(free_indices(dims[d], model.bcs[d]));
  model.free_dofs.clear();
  if (dims.size() == 1) {
    model.free_dofs = model.free_per_dir[0];
  } else if (dims.size() == 2) {
    for (std::size_t i1 : model.free_per_dir[0])
      for (std::size_t i2 : model.free_per_dir[1]) model.free_dofs.push_back(i1 * dims[1] + i2);
  } else {
    for (std::size_t i1 : model.free_per_dir[0])
      for (std::size_t i2 : model.free_per_dir[1])
        for (std::size_t i3 : model.free_per_dir[2])
          model.free_dofs.push_back((i1 * dims[1] + i2) * dims[2] + i3);
  }
}

SymMatrix mass_1d_weighted(const SplineSpace& space, const std::function<double(double)>& weight) {
  const QuadLayout q = build_quadrature(space);
  SymMatrix m(space.dim());
  for (std::size_t g = 0; g < q.x.size(); ++g) {
    const auto& b = q.basis[g];
    const double wq = q.w[g] * weight(q.x[g]);
    for (std::size_t a = 0; a < b.values.size(); ++a)
      for (std::size_t c = a; c < b.values.size(); ++c)
        m.add(b.first + a, b.first + c, wq * b.values[a] * b.values[c]);
  }
  return m;
}

SymMatrix stiffness_1d_weighted(const SplineSpace& space,
                                const std::function<double(double)>& weight) {
  const QuadLayout q = build_quadrature(space);
  SymMatrix k(space.dim());
  for (std::size_t g = 0; g < q.x.size(); ++g) {
    const auto& b = q.basis[g];
    const double wq = q.w[g] * weight(q.x[g]);
    for (std::size_t a = 0; a < b.derivs.size(); ++a)
      for (std::size_t c = a; c < b.derivs.size(); ++c)
        k.add(b.first + a, b.first + c, wq * b.derivs[a] * b.derivs[c]);
  }
  return k;
}

}  // namespace

std::vector<SymMatrix> DiscreteModel::mass_factors_free() const {
  if (!kron_flag) throw ConfigError("model mass is not in Kronecker form");
  std::vector<SymMatrix> out;
  out.reserve(mass_factors.size());
  for (std::size_t d = 0; d < mass_factors.size(); ++d)
    out.push_back(mass_factors[d].restricted(free_per_dir[d]));
  return out;
}

Vec DiscreteModel::embed(const Vec& coeffs_free) const {
  if (coeffs_free.size() != free_dofs.size())
    throw DimensionMismatch("coefficient vector does not match free DOF count");
  Vec full(n_full(), 0.0);
  for (std::size_t i = 0; i < free_dofs.size(); ++i) full[free_dofs[i]] = coeffs_free[i];
  return full;
}

DiscreteModel assemble_1d(const SplineSpace& space, const DensityField& density,
                          const GeometryMap& geometry, const DirectionBc& bc) {
  if (geometry.dim() != 1) throw ConfigError("assemble_1d expects a 1D geometry");
  DiscreteModel model{.spaces = {space},
                      .geometry = geometry,
                      .density = density,
                      .bcs = {bc},
                      .mass_full = SymMatrix(space.dim()),
                      .stiffness_full = SymMatrix(space.dim())};

  const QuadLayout q = build_quadrature(space);
  for (std::size_t g = 0; g < q.x.size(); ++g) {
    const auto& b = q.basis[g];
    const GeometryEval geo = geometry.eval({q.x[g], 0.0, 0.0});
    const double adet = std::fabs(geo.det);
    if (!(adet > 0.0)) throw ConfigError("singular geometry at a quadrature point");
    const double rho = density.value(geo.x, g);
    if (!(rho > 0.0)) throw ConfigError("non-positive density at a quadrature point");
    const double wm = q.w[g] * adet * rho;
    const double wk = q.w[g] / adet;  // physical derivative carries 1/J
    for (std::size_t a = 0; a < b.values.size(); ++a)
      for (std::size_t c = a; c < b.values.size(); ++c) {
        model.mass_full.add(b.first + a, b.first + c, wm * b.values[a] * b.values[c]);
        model.stiffness_full.add(b.first + a, b.first + c, wk * b.derivs[a] * b.derivs[c]);
      }
  }
  build_free_dofs(model);
  return model;
}

SymMatrix assemble_full_mass_2d(const std::vector<SplineSpace>& spaces,
                                const DensityField& density, const GeometryMap& geometry) {
  const QuadLayout q1 = build_quadrature(spaces[0]);
  const QuadLayout q2 = build_quadrature(spaces[1]);
  const std::size_t n2 = spaces[1].dim();
  SymMatrix mass(spaces[0].dim() * n2);
  for (std::size_t g1 = 0; g1 < q1.x.size(); ++g1) {
    const auto& b1 = q1.basis[g1];
    for (std::size_t g2 = 0; g2 < q2.x.size(); ++g2) {
      const auto& b2 = q2.basis[g2];
      const GeometryEval geo = geometry.eval({q1.x[g1], q2.x[g2], 0.0});
      const double adet = std::fabs(geo.det);
      if (!(adet > 0.0)) throw ConfigError("singular geometry at a quadrature point");
      const double rho = density.value(geo.x, g1 * q2.x.size() + g2);
      if (!(rho > 0.0)) throw ConfigError("non-positive density at a quadrature point");
      const double wq = q1.w[g1] * q2.w[g2] * adet * rho;
      for (std::size_t a = 0; a < b1.values.size(); ++a)
        for (std::size_t b = 0; b < b2.values.size(); ++b) {
          const std::size_t gi = (b1.first + a) * n2 + (b2.first + b);
          const double vi = b1.values[a] * b2.values[b];
          for (std::size_t c = 0; c < b1.values.size(); ++c)
            for (std::size_t d = 0; d < b2.values.size(); ++d) {
              const std::size_t gj = (b1.first + c) * n2 + (b2.first + d);
              if (gj < gi) continue;
              mass.add(gi, gj, wq * vi * b1.values[c] * b2.values[d]);
            }
        }
    }
  }
  return mass;
}

DiscreteModel assemble_2d(const std::vector<SplineSpace>& spaces, const DensityField& density,
                          const GeometryMap& geometry, const std::vector<DirectionBc>& bcs) {
  if (spaces.size() != 2 || bcs.size() != 2) throw ConfigError("assemble_2d expects two directions");
  if (geometry.dim() != 2) throw ConfigError("assemble_2d expects a 2D geometry");

  DiscreteModel model{.spaces = spaces,
                      .geometry = geometry,
                      .density = density,
                      .bcs = bcs,
                      .mass_full = SymMatrix(spaces[0].dim() * spaces[1].dim()),
                      .stiffness_full = SymMatrix(spaces[0].dim() * spaces[1].dim())};

  const bool separable = geometry.has_separable_weight() && density.separable();
  if (separable) {
    const double c = density.value({0, 0, 0}, 0);  // constant density
    model.kron_flag = true;
    model.mass_factors.push_back(mass_1d_weighted(
        spaces[0], [&](double x) { return c * geometry.weight_factor(0, x); }));
    model.mass_factors.push_back(
        mass_1d_weighted(spaces[1], [&](double x) { return geometry.weight_factor(1, x); }));
    model.mass_full =
        KronOperator::single({model.mass_factors[0], model.mass_factors[1]}).materialize(8192);
  } else {
    model.mass_full = assemble_full_mass_2d(spaces, density, geometry);
  }

  // stiffness by tensor quadrature with physical gradients
  const QuadLayout q1 = build_quadrature(spaces[0]);
  const QuadLayout q2 = build_quadrature(spaces[1]);
  const std::size_t n2 = spaces[1].dim();
  const std::size_t nb1 = static_cast<std::size_t>(spaces[0].degree()) + 1;
  const std::size_t nb2 = static_cast<std::size_t>(spaces[1].degree()) + 1;
  std::vector<double> gx(nb1 * nb2), gy(nb1 * nb2);
  for (std::size_t g1 = 0; g1 < q1.x.size(); ++g1) {
    const auto& b1 = q1.basis[g1];
    for (std::size_t g2 = 0; g2 < q2.x.size(); ++g2) {
      const auto& b2 = q2.basis[g2];
      const GeometryEval geo = geometry.eval({q1.x[g1], q2.x[g2], 0.0});
      const double det = geo.det;
      if (det == 0.0) throw ConfigError("singular geometry at a quadrature point");
      const double wq = q1.w[g1] * q2.w[g2] * std::fabs(det);
      const double j00 = geo.jac[0][0], j01 = geo.jac[0][1];
      const double j10 = geo.jac[1][0], j11 = geo.jac[1][1];
      for (std::size_t a = 0; a < nb1; ++a)
        for (std::size_t b = 0; b < nb2; ++b) {
          const double gh0 = b1.derivs[a] * b2.values[b];
          const double gh1 = b1.values[a] * b2.derivs[b];
          gx[a * nb2 + b] = (j11 * gh0 - j10 * gh1) / det;
          gy[a * nb2 + b] = (-j01 * gh0 + j00 * gh1) / det;
        }
      for (std::size_t a = 0; a < nb1; ++a)
        for (std::size_t b = 0; b < nb2; ++b) {
          const std::size_t gi = (b1.first + a) * n2 + (b2.first + b);
          const std::size_t la = a * nb2 + b;
          for (std::size_t c = 0; c < nb1; ++c)
            for (std::size_t d = 0; d < nb2; ++d) {
              const std::size_t gj = (b1.first + c) * n2 + (b2.first + d);
              if (gj < gi) continue;
              const std::size_t lb = c * nb2 + d;
              model.stiffness_full.add(gi, gj, wq * (gx[la] * gx[lb] + gy[la] * gy[lb]));
            }
        }
    }
  }
  build_free_dofs(model);
  return model;
}

DiscreteModel assemble_3d(const std::vector<SplineSpace>& spaces, const DensityField& density,
                          const std::vector<DirectionBc>& bcs) {
  if (spaces.size() != 3 || bcs.size() != 3) throw ConfigError("assemble_3d expects three directions");
  if (!density.separable()) throw ConfigError("assemble_3d supports separable densities only");

  DiscreteModel model{.spaces = spaces,
                      .geometry = GeometryMap::named("unit_cube"),
                      .density = density,
                      .bcs = bcs,
                      .mass_full = SymMatrix(1),
                      .stiffness_full = SymMatrix(1)};
  const double c = density.value({0, 0, 0}, 0);
  std::vector<SymMatrix> ms, ks;
  for (std::size_t d = 0; d < 3; ++d) {
    const double w = d == 0 ? c : 1.0;
    ms.push_back(mass_1d_weighted(spaces[d], [&](double) { return w; }));
    ks.push_back(stiffness_1d_weighted(spaces[d], [&](double) { return w; }));
  }
  model.kron_flag = true;
  model.mass_factors = ms;
  model.mass_full = KronOperator::single({ms[0], ms[1], ms[2]}).materialize(8192);
  KronOperator stiff({KronTerm{1.0, {ks[0], ms[1], ms[2]}}, KronTerm{1.0, {ms[0], ks[1], ms[2]}},
                      KronTerm{1.0, {ms[0], ms[1], ks[2]}}});
  model.stiffness_full = stiff.materialize(8192);
  build_free_dofs(model);
  return model;
}

double total_mass(const DiscreteModel& model) {
  std::vector<QuadLayout> qs;
  for (const auto& s : model.spaces) qs.push_back(build_quadrature(s));
  double acc = 0.0;
  if (qs.size() == 1) {
    for (std::size_t g = 0; g < qs[0].x.size(); ++g) {
      const GeometryEval geo = model.geometry.eval({qs[0].x[g], 0.0, 0.0});
      acc += qs[0].w[g] * std::fabs(geo.det) *
             model.density.value(geo.x, g);
    }
  } else if (qs.size() == 2) {
    for (std::size_t g1 = 0; g1 < qs[0].x.size(); ++g1)
      for (std::size_t g2 = 0; g2 < qs[1].x.size(); ++g2) {
        const GeometryEval geo = model.geometry.eval({qs[0].x[g1], qs[1].x[g2], 0.0});
        acc += qs[0].w[g1] * qs[1].w[g2] * std::fabs(geo.det) *
               model.density.value(geo.x, g1 * qs[1].x.size() + g2);
      }
  } else {
    for (std::size_t g1 = 0; g1 < qs[0].x.size(); ++g1)
      for (std::size_t g2 = 0; g2 < qs[1].x.size(); ++g2)
        for (std::size_t g3 = 0; g3 < qs[2].x.size(); ++g3) {
          const GeometryEval geo =
              model.geometry.eval({qs[0].x[g1], qs[1].x[g2], qs[2].x[g3]});
          acc += qs[0].w[g1] * qs[1].w[g2] * qs[2].w[g3] * std::fabs(geo.det) *
                 model.density.value(geo.x, 0);
        }
  }
  return acc;
}

double exact_eigenfrequency(const std::string& problem_id) {
  if (problem_id == "laplace_1d_mixed") return 0.5 * M_PI;
  if (problem_id == "laplace_2d_mixed") return M_PI / std::sqrt(2.0);
  if (problem_id == "laplace_1d_dirichlet") return M_PI;
  throw ConfigError("unknown problem id: " + problem_id);
}

double l2_error(const DiscreteModel& model, const Vec& coeffs_free, const SpatialFn& exact) {
  const Vec full = model.embed(coeffs_free);
  std::vector<QuadLayout> qs;
  for (const auto& s : model.spaces) qs.push_back(build_quadrature(s));
  double acc = 0.0;
  if (qs.size() == 1) {
    for (std::size_t g = 0; g < qs[0].x.size(); ++g) {
      const auto& b = qs[0].basis[g];
      const GeometryEval geo = model.geometry.eval({qs[0].x[g], 0.0, 0.0});
      double uh = 0.0;
      for (std::size_t a = 0; a < b.values.size(); ++a) uh += full[b.first + a] * b.values[a];
      const double diff = uh - exact(geo.x);
      acc += qs[0].w[g] * std::fabs(geo.det) * diff * diff;
    }
  } else if (qs.size() == 2) {
    const std::size_t n2 = model.spaces[1].dim();
    for (std::size_t g1 = 0; g1 < qs[0].x.size(); ++g1) {
      const auto& b1 = qs[0].basis[g1];
      for (std::size_t g2 = 0; g2 < qs[1].x.size(); ++g2) {
        const auto& b2 = qs[1].basis[g2];
        const GeometryEval geo = model.geometry.eval({qs[0].x[g1], qs[1].x[g2], 0.0});
        double uh = 0.0;
        for (std::size_t a = 0; a < b1.values.size(); ++a)
          for (std::size_t b = 0; b < b2.values.size(); ++b)
            uh += full[(b1.first + a) * n2 + (b2.first + b)] * b1.values[a] * b2.values[b];
        const double diff = uh - exact(geo.x);
        acc += qs[0].w[g1] * qs[1].w[g2] * std::fabs(geo.det) * diff * diff;
      }
    }
  } else {
    throw ConfigError("l2_error supports 1D and 2D models");
  }
  return std::sqrt(acc);
}

Vec l2_load(const DiscreteModel& model, const SpatialFn& fn) {
  std::vector<QuadLayout> qs;
  for (const auto& s : model.spaces) qs.push_back(build_quadrature(s));
  Vec load(model.n_full(), 0.0);
  if (qs.size() == 1) {
    for (std::size_t g = 0; g < qs[0].x.size(); ++g) {
      const auto& b = qs[0].basis[g];
      const GeometryEval geo = model.geometry.eval({qs[0].x[g], 0.0, 0.0});
      const double wq = qs[0].w[g] * std::fabs(geo.det) * fn(geo.x);
      for (std::size_t a = 0; a < b.values.size(); ++a) load[b.first + a] += wq * b.values[a];
    }
  } else if (qs.size() == 2) {
    const std::size_t n2 = model.spaces[1].dim();
    for (std::size_t g1 = 0; g1 < qs[0].x.size(); ++g1) {
      const auto& b1 = qs[0].basis[g1];
      for (std::size_t g2 = 0; g2 < qs[1].x.size(); ++g2) {
        const auto& b2 = qs[1].basis[g2];
        const GeometryEval geo = model.geometry.eval({qs[0].x[g1], qs[1].x[g2], 0.0});
        const double wq = qs[0].w[g1] * qs[1].w[g2] * std::fabs(geo.det) * fn(geo.x);
        for (std::size_t a = 0; a < b1.values.size(); ++a)
          for (std::size_t b = 0; b < b2.values.size(); ++b)
            load[(b1.first + a) * n2 + (b2.first + b)] += wq * b1.values[a] * b2.values[b];
      }
    }
  } else {
    throw ConfigError("l2_load supports 1D and 2D models");
  }
  return load;
}

Vec l2_project(const DiscreteModel& model, const SpatialFn& fn) {
  // density-weighted load pairs with the assembled mass, so constant
  // densities cancel and the result is the plain L2 projection
  std::vector<QuadLayout> qs;
  for (const auto& s : model.spaces) qs.push_back(build_quadrature(s));
  Vec load(model.n_full(), 0.0);
  if (qs.size() == 1) {
    for (std::size_t g = 0; g < qs[0].x.size(); ++g) {
      const auto& b = qs[0].basis[g];
      const GeometryEval geo = model.geometry.eval({qs[0].x[g], 0.0, 0.0});
      const double wq =
          qs[0].w[g] * std::fabs(geo.det) * model.density.value(geo.x, g) * fn(geo.x);
      for (std::size_t a = 0; a < b.values.size(); ++a) load[b.first + a] += wq * b.values[a];
    }
  } else if (qs.size() == 2) {
    const std::size_t n2 = model.spaces[1].dim();
    for (std::size_t g1 = 0; g1 < qs[0].x.size(); ++g1) {
      const auto& b1 = qs[0].basis[g1];
      for (std::size_t g2 = 0; g2 < qs[1].x.size(); ++g2) {
        const auto& b2 = qs[1].basis[g2];
        const GeometryEval geo = model.geometry.eval({qs[0].x[g1], qs[1].x[g2], 0.0});
        const double wq = qs[0].w[g1] * qs[1].w[g2] * std::fabs(geo.det) *
                          model.density.value(geo.x, g1 * qs[1].x.size() + g2) * fn(geo.x);
        for (std::size_t a = 0; a < b1.values.size(); ++a)
          for (std::size_t b = 0; b < b2.values.size(); ++b)
            load[(b1.first + a) * n2 + (b2.first + b)] += wq * b1.values[a] * b2.values[b];
      }
    }
  } else {
    throw ConfigError("l2_project supports 1D and 2D models");
  }
  Vec load_free(model.n_free());
  for (std::size_t i = 0; i < model.free_dofs.size(); ++i) load_free[i] = load[model.free_dofs[i]];
  DenseCholesky mass(model.mass());
  return mass.solve(load_free);
}

}  // namespace lumplab
