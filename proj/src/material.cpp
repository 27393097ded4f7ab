#include "biot/material.hpp"

#include <cmath>
#include <string>

#include "biot/errors.hpp"

namespace biot {

void MaterialParams::validate() const {
  auto fail = [](const std::string& m) { throw InvalidArgument(m); };
  if (!(lambda >= 0.0)) fail("lambda must be >= 0");
  if (!(mu > 0.0)) fail("mu must be > 0");
  if (!(alpha_b >= 0.0 && alpha_b <= 1.0)) fail("alpha_b must lie in [0,1]");
  if (!(M > 0.0)) fail("Biot modulus M must be > 0");
  for (int a = 0; a < 3; ++a)
    if (!(K[a] > 0.0)) fail("permeability entries must be > 0");
  if (!(eta > 0.0)) fail("viscosity eta must be > 0");
  if (!(phi > 0.0 && phi < 1.0)) fail("porosity phi must lie in (0,1)");
  if (!(rho_f >= 0.0) || !(rho_s >= 0.0)) fail("densities must be >= 0");
  if (K_dr && !(*K_dr > 0.0)) fail("K_dr must be > 0");
}

std::pair<double, double> lame_from_young(double E, double nu) {
  if (!(E > 0.0)) throw InvalidArgument("Young's modulus must be > 0");
  if (nu == 0.5) throw InvalidArgument("Poisson ratio 1/2 is incompressible; lambda is unbounded");
  if (!(nu > -1.0 && nu < 0.5)) throw InvalidArgument("Poisson ratio must lie in (-1, 1/2)");
  const double lambda = E * nu / ((1.0 - 2.0 * nu) * (1.0 + nu));
  const double mu = E / (2.0 * (1.0 + nu));
  return {lambda, mu};
}

Coupling derive_coupling(double phi, double c_f, double K_s, double K_dr) {
  if (!(phi > 0.0 && phi < 1.0)) throw InvalidArgument("porosity must lie in (0,1)");
  if (!(c_f >= 0.0)) throw InvalidArgument("fluid compressibility must be >= 0");
  if (!(K_s > 0.0)) throw InvalidArgument("grain bulk modulus must be > 0");
  if (!(K_dr > 0.0)) throw InvalidArgument("drained bulk modulus must be > 0");
  if (!(K_dr < K_s)) throw InvalidArgument("drained bulk modulus must be below the grain modulus (alpha_b <= 0)");
  const double inv_Ks = std::isinf(K_s) ? 0.0 : 1.0 / K_s;
  const double alpha = 1.0 - inv_Ks * K_dr;
  const double inv_M = phi * c_f + inv_Ks * (alpha - phi);
  if (!(inv_M > 0.0)) throw InvalidArgument("derived storage coefficient 1/M is not positive");
  return {alpha, 1.0 / inv_M};
}

Mat3 apply_elasticity(const MaterialParams& m, const Mat3& eps, int dim) {
  Mat3 s = 2.0 * m.mu * eps;
  const double tr = eps.trace();
  for (int a = 0; a < dim; ++a) s(a, a) += m.lambda * tr;
  return s;
}

void CellMaterials::validate() const {
  base_.validate();
  for (const auto& [cell, p] : overrides_) {
    try {
      p.validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("cell " + std::to_string(cell) + ": " + e.what());
    }
  }
}

namespace {

template <class F>
void for_gauss_points(const Mesh& mesh, int n, F&& f) {
  const CellQuadrature q = tensor_gauss(mesh.dim(), n);
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (std::size_t k = 0; k < q.size(); ++k) f(c, q.points[k]);
}

void check_fields(const Mesh& mesh, const DofMap& du, const Vector& u, const DofMap& dp, const Vector& p) {
  check_compatible(mesh, du);
  check_compatible(mesh, dp);
  if (du.kind() != SpaceKind::Displacement || dp.kind() != SpaceKind::Pressure)
    throw InvalidArgument("expected a displacement and a pressure space");
  if (u.size() != du.n_dofs() || p.size() != dp.n_dofs()) throw InvalidArgument("coefficient length mismatch");
}

}  // namespace

std::vector<StressSample> volumetric_stress(const Mesh& mesh, const DofMap& du, const Vector& u, const DofMap& dp,
                                            const Vector& p, const ReferenceState& ref, const CellMaterials& mat) {
  check_fields(mesh, du, u, dp, p);
  const int d = mesh.dim();
  std::vector<StressSample> out;
  for_gauss_points(mesh, du.order() + 1, [&](int c, const Point& xh) {
    const MaterialParams& m = mat.at(c);
    StressSample s;
    s.cell = c;
    s.x = mesh.to_physical(c, xh);
    const Mat3 G = du.eval_gradient(mesh, c, xh, u) - ref.grad_u0(s.x);
    const Mat3 eps = 0.5 * (G + G.transpose());
    const double dp_ = dp.eval_scalar(mesh, c, xh, p) - ref.p0(s.x);
    const Mat3 s0 = ref.sigma0(s.x);
    Mat3 I = Mat3::Zero();
    for (int a = 0; a < d; ++a) I(a, a) = 1.0;
    s.sigma = s0 + apply_elasticity(m, eps, d) - m.alpha_b * dp_ * I;
    s.sigma_v = s0.trace() / d + m.drained_bulk(d) * eps.trace() - m.alpha_b * dp_;
    s.deviatoric = s.sigma - (s.sigma.trace() / d) * I;
    out.push_back(s);
  });
  return out;
}

std::vector<MassSample> fluid_mass(const Mesh& mesh, const DofMap& du, const Vector& u, const DofMap& dp,
                                   const Vector& p, const ReferenceState& ref, const CellMaterials& mat) {
  check_fields(mesh, du, u, dp, p);
  std::vector<MassSample> out;
  for_gauss_points(mesh, du.order() + 1, [&](int c, const Point& xh) {
    const MaterialParams& m = mat.at(c);
    MassSample s;
    s.cell = c;
    s.x = mesh.to_physical(c, xh);
    const double ev = du.eval_divergence(mesh, c, xh, u) - ref.grad_u0(s.x).trace();
    const double dp_ = dp.eval_scalar(mesh, c, xh, p) - ref.p0(s.x);
    s.m = ref.m0 + ref.rho_f0 * m.alpha_b * ev + ref.rho_f0 * m.inv_M() * dp_;
    out.push_back(s);
  });
  return out;
}

}  // namespace biot
