#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "biot/fespace.hpp"
#include "biot/mesh.hpp"
#include "biot/types.hpp"

namespace biot {

struct MaterialParams {
  double lambda = 1.0;
  double mu = 1.0;
  double alpha_b = 1.0;
  double M = 10.0;           ///< Biot modulus; +inf means 1/M = 0
  Vec3 K = Vec3::Ones();     ///< diagonal permeability
  double eta = 1.0;
  double phi = 0.3;
  double rho_f = 0.0;
  double rho_s = 0.0;
  std::optional<double> K_dr;  ///< drained bulk modulus, defaults to lambda + 2 mu / d

  double inv_M() const { return 1.0 / M; }
  double rho_b() const { return phi * rho_f + (1.0 - phi) * rho_s; }
  double drained_bulk(int dim) const { return K_dr ? *K_dr : lambda + 2.0 * mu / dim; }
  /// Throws InvalidArgument naming the first violated bound.
  void validate() const;
};

/// (lambda, mu) from Young's modulus and Poisson's ratio.
std::pair<double, double> lame_from_young(double E, double nu);

struct Coupling {
  double alpha_b;
  double M;
};

/// Biot coefficient and modulus from porosity, fluid compressibility and the
/// grain/drained bulk moduli. K_s may be +inf.
Coupling derive_coupling(double phi, double c_f, double K_s, double K_dr);

/// C eps = lambda tr(eps) I + 2 mu eps.
Mat3 apply_elasticity(const MaterialParams& m, const Mat3& eps, int dim);

/// Piecewise-constant parameters: one default plus per-cell overrides.
class CellMaterials {
 public:
  CellMaterials() = default;
  explicit CellMaterials(MaterialParams base) : base_(std::move(base)) {}

  const MaterialParams& base() const { return base_; }
  const MaterialParams& at(int cell) const {
    auto it = overrides_.find(cell);
    return it == overrides_.end() ? base_ : it->second;
  }
  void set(int cell, MaterialParams p) { overrides_[cell] = std::move(p); }
  bool uniform() const { return overrides_.empty(); }
  const std::map<int, MaterialParams>& overrides() const { return overrides_; }
  void validate() const;

 private:
  MaterialParams base_;
  std::map<int, MaterialParams> overrides_;
};

struct ReferenceState {
  std::function<Vec3(const Point&)> u0 = [](const Point&) { return Vec3::Zero().eval(); };
  std::function<Mat3(const Point&)> grad_u0 = [](const Point&) { return Mat3::Zero().eval(); };
  std::function<double(const Point&)> p0 = [](const Point&) { return 0.0; };
  std::function<Mat3(const Point&)> sigma0 = [](const Point&) { return Mat3::Zero().eval(); };
  double m0 = 0.0;
  double rho_f0 = 1.0;
};

struct StressSample {
  int cell = 0;
  Point x = Point::Zero();
  double sigma_v = 0.0;
  Mat3 sigma = Mat3::Zero();
  Mat3 deviatoric = Mat3::Zero();
};

/// Volumetric, total and deviatoric stress at the Gauss points of every cell.
std::vector<StressSample> volumetric_stress(const Mesh& mesh, const DofMap& du, const Vector& u, const DofMap& dp,
                                            const Vector& p, const ReferenceState& ref, const CellMaterials& mat);

struct MassSample {
  int cell = 0;
  Point x = Point::Zero();
  double m = 0.0;
};

/// Fluid mass content at the Gauss points of every cell.
std::vector<MassSample> fluid_mass(const Mesh& mesh, const DofMap& du, const Vector& u, const DofMap& dp,
                                   const Vector& p, const ReferenceState& ref, const CellMaterials& mat);

}  // namespace biot
