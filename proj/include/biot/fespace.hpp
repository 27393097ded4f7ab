#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "biot/mesh.hpp"
#include "biot/types.hpp"

namespace biot {

/// Tensor quadrature on (0,1)^d, or on one face of it (the normal coordinate
/// fixed to 0 or 1, weights summing to 1).
struct CellQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

CellQuadrature tensor_gauss(int dim, int n);
CellQuadrature face_gauss(int dim, Side side, int n);

/// Tensor-product Lagrange element on (0,1)^d. Local numbering is
/// lexicographic with x fastest.
class ScalarQ {
 public:
  ScalarQ() = default;
  ScalarQ(int dim, std::vector<double> nodes1d);
  /// Equispaced nodes including the vertices; order 0 is the constant.
  static ScalarQ equispaced(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return static_cast<int>(nodes_.size()) - 1; }
  int size() const { return size_; }
  const std::vector<double>& nodes1d() const { return nodes_; }
  std::array<int, 3> multi_index(int i) const;
  Point node(int i) const;

  double value(int i, const Point& xh) const;
  /// Reference gradient.
  Vec3 gradient(int i, const Point& xh) const;

 private:
  double v1(int k, double x) const;
  double d1(int k, double x) const;

  int dim_ = 0;
  int size_ = 0;
  std::vector<double> nodes_;
  std::vector<double> bary_;
};

/// Raviart-Thomas element RT_k on (0,1)^d. Component a of every shape
/// function is a tensor Lagrange polynomial: degree k+1 along a on the nodes
/// {0,1} (k=0) or {0,1/2,1} (k=1), degree k across a on Gauss points. Each
/// shape function has a single nonzero component and takes the value 1 at its
/// own node, so on faces it is the normal component along +e_a.
class RaviartThomasQ {
 public:
  struct LocalDof {
    int component = 0;
    std::array<int, 3> index{0, 0, 0};
    std::optional<Side> side;  ///< set for face dofs
    int tangential = -1;       ///< index among the dofs of that face
    int interior = -1;         ///< index among interior dofs
    Point node = Point::Zero();
  };

  RaviartThomasQ() = default;
  RaviartThomasQ(int dim, int k);

  int dim() const { return dim_; }
  int order() const { return k_; }
  int size() const { return static_cast<int>(dofs_.size()); }
  int dofs_per_face() const { return per_face_; }
  int interior_dofs() const { return n_interior_; }
  const LocalDof& dof(int i) const { return dofs_[i]; }

  /// Reference shape function. On an axis-aligned box the physical basis
  /// function equals this, evaluated at the reference point.
  Vec3 value(int i, const Point& xh) const;
  /// Reference divergence d(phi_a)/d(xhat_a).
  double ref_divergence(int i, const Point& xh) const;
  /// Physical divergence on a box with edge lengths h.
  double divergence(int i, const Point& xh, const Vec3& h) const { return ref_divergence(i, xh) / h[dof(i).component]; }

 private:
  double along(int k, double x) const;
  double along_d(int k, double x) const;
  double across(int k, double x) const;

  int dim_ = 0;
  int k_ = 0;
  int per_face_ = 0;
  int n_interior_ = 0;
  std::vector<double> along_nodes_, across_nodes_;
  std::vector<double> along_bary_, across_bary_;
  std::vector<LocalDof> dofs_;
};

/// Contravariant Piola map for a box of edge lengths h (diagonal Jacobian).
Vec3 contravariant_piola(const Vec3& h, int dim, const Vec3& vhat);
/// Divergence of a Piola-mapped field from its reference divergence.
double piola_divergence(const Vec3& h, int dim, double ref_div);

enum class SpaceKind { Displacement, Flux, Pressure };

class DofMap {
 public:
  SpaceKind kind() const { return kind_; }
  int order() const { return order_; }
  int dim() const { return dim_; }
  int n_dofs() const { return n_dofs_; }
  int dofs_per_cell() const { return per_cell_; }
  std::span<const int> cell_dofs(int cell) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(cell) * per_cell_, static_cast<std::size_t>(per_cell_)};
  }
  /// Orientation of each cell-local flux dof relative to the canonical face
  /// normal (always +1 for the axis-oriented basis used here).
  int sign(int cell, int local) const { return signs_.empty() ? 1 : signs_[static_cast<std::size_t>(cell) * per_cell_ + local]; }
  bool constrained(int dof) const { return constrained_[dof] != 0; }
  int n_constrained() const;
  const std::vector<char>& constraint_mask() const { return constrained_; }
  std::uint64_t mesh_fingerprint() const { return fingerprint_; }

  const ScalarQ& scalar_element() const { return scalar_; }
  const RaviartThomasQ& rt_element() const { return rt_; }
  /// Number of vector components of the field (d for displacement and flux).
  int components() const { return kind_ == SpaceKind::Pressure ? 1 : dim_; }
  /// Cell-local shape function count of the underlying scalar/RT element.
  int n_shape() const { return kind_ == SpaceKind::Flux ? rt_.size() : scalar_.size(); }

  /// Physical position of a displacement dof (its node).
  Point support_point(int dof) const { return support_[dof / dim_]; }
  int n_nodes() const { return static_cast<int>(support_.size()); }

  /// Zeroes entries at constrained dofs.
  void zero_constrained(Vector& v) const;

  // Field evaluation at reference point xh of a cell.
  double eval_scalar(const Mesh& mesh, int cell, const Point& xh, const Vector& c) const;
  Vec3 eval_vector(const Mesh& mesh, int cell, const Point& xh, const Vector& c) const;
  /// Physical gradient of a displacement field, rows are components.
  Mat3 eval_gradient(const Mesh& mesh, int cell, const Point& xh, const Vector& c) const;
  double eval_divergence(const Mesh& mesh, int cell, const Point& xh, const Vector& c) const;

  friend DofMap build_displacement_space(const Mesh& mesh, int p);
  friend DofMap build_flux_space(const Mesh& mesh, int k);
  friend DofMap build_pressure_space(const Mesh& mesh, int k);

 private:
  SpaceKind kind_ = SpaceKind::Pressure;
  int order_ = 0;
  int dim_ = 0;
  int n_dofs_ = 0;
  int per_cell_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<signed char> signs_;
  std::vector<char> constrained_;
  std::vector<Point> support_;
  std::uint64_t fingerprint_ = 0;
  ScalarQ scalar_;
  RaviartThomasQ rt_;
};

/// Continuous vector Q_p, dof = d*node + component. Componentwise Dirichlet
/// constraints follow the mesh tags (none if the mesh is untagged).
DofMap build_displacement_space(const Mesh& mesh, int p);
/// RT_k with face dofs numbered before interior dofs; dofs on flux-tagged
/// boundary faces are constrained.
DofMap build_flux_space(const Mesh& mesh, int k);
/// Discontinuous Q_k; order 1 uses the cell vertices as nodes.
DofMap build_pressure_space(const Mesh& mesh, int k);

/// Throws InvalidArgument unless the map was built on this mesh.
void check_compatible(const Mesh& mesh, const DofMap& map);

}  // namespace biot
