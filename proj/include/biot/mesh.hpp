#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biot/types.hpp"

namespace biot {

/// The 2d sides of an axis-aligned box, ordered (axis, low/high).
enum class Side : int { XLow = 0, XHigh = 1, YLow = 2, YHigh = 3, ZLow = 4, ZHigh = 5 };

inline int side_axis(Side s) { return static_cast<int>(s) / 2; }
inline bool side_is_high(Side s) { return static_cast<int>(s) % 2 == 1; }
inline Side make_side(int axis, bool high) { return static_cast<Side>(2 * axis + (high ? 1 : 0)); }
std::string_view side_name(Side s);
std::optional<Side> parse_side(std::string_view name);

enum class FlowBC { Pressure, Flux };
enum class MechBC { Dirichlet, Traction };

/// Boundary classification of one face: one flow class, one mechanical class
/// per displacement component.
struct BoundaryTag {
  FlowBC flow = FlowBC::Flux;
  std::array<MechBC, 3> mech{MechBC::Traction, MechBC::Traction, MechBC::Traction};
};

/// Per-side boundary classes; must cover every side of the box.
struct BoundarySpec {
  std::map<Side, BoundaryTag> sides;

  /// Normal component fixed, tangential components traction-free.
  static BoundaryTag roller(Side s, FlowBC flow);
  static BoundaryTag clamped(FlowBC flow);
  static BoundaryTag free(FlowBC flow);
};

struct Cell {
  std::array<int, 3> index{0, 0, 0};
  Point lower = Point::Zero();
  Point upper = Point::Zero();
  double volume = 0.0;
  double diameter = 0.0;
  /// Global face ids ordered x-, x+, y-, y+, z-, z+ (first 2d entries used).
  std::array<int, 6> faces{-1, -1, -1, -1, -1, -1};

  Point size() const { return upper - lower; }
};

/// Face normals point in the positive axis direction. The owner is the
/// lower-index incident cell; boundary faces have no neighbor.
struct Face {
  int axis = 0;
  Point center = Point::Zero();
  double area = 0.0;
  int lower_cell = -1;  ///< cell on the negative-normal side
  int upper_cell = -1;  ///< cell on the positive-normal side
  std::optional<Side> boundary;

  int owner() const { return lower_cell >= 0 ? lower_cell : upper_cell; }
  int neighbor() const { return lower_cell >= 0 ? upper_cell : -1; }
  bool is_boundary() const { return boundary.has_value(); }
  Vec3 normal() const { return Vec3::Unit(axis); }
  /// +1 when the canonical normal is the outward normal of `cell`, -1 otherwise.
  int incidence(int cell) const;
};

/// Structured axis-aligned box mesh of quadrilaterals (d=2) or hexahedra (d=3).
/// Immutable after construction.
class Mesh {
 public:
  int dim() const { return dim_; }
  const std::array<double, 3>& extents() const { return extents_; }
  const std::array<int, 3>& divisions() const { return divisions_; }
  double spacing(int axis) const { return extents_[axis] / divisions_[axis]; }

  std::span<const Cell> cells() const { return cells_; }
  std::span<const Face> faces() const { return faces_; }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_faces() const { return static_cast<int>(faces_.size()); }
  const Cell& cell(int c) const { return cells_[c]; }
  const Face& face(int f) const { return faces_[f]; }

  int cell_id(const std::array<int, 3>& idx) const;
  /// Id of the face of `cell` on local side s.
  int cell_face(int cell, Side s) const { return cells_[cell].faces[static_cast<int>(s)]; }

  /// h = max over cells of the cell diameter.
  double h() const { return h_; }

  /// Cell containing x; points on interior cell boundaries go to the lower cell.
  std::optional<int> locate(const Point& x, double tol = 1e-12) const;
  /// Reference coordinates of x in `cell`.
  Point to_reference(int cell, const Point& x) const;
  Point to_physical(int cell, const Point& xhat) const;

  bool tagged() const { return !tags_.empty(); }
  /// Boundary tag of a boundary face; requires tagged().
  const BoundaryTag& tag(int face) const;
  const BoundaryTag& side_tag(Side s) const;

  /// Identity of the geometry (extents and divisions); spaces built on meshes
  /// with equal fingerprints are compatible.
  std::uint64_t fingerprint() const { return fingerprint_; }

  friend Mesh build_box_mesh(std::span<const double> extents, std::span<const int> divisions);
  friend Mesh tag_boundaries(const Mesh& mesh, const BoundarySpec& spec);

 private:
  Mesh() = default;

  int dim_ = 0;
  std::array<double, 3> extents_{0, 0, 0};
  std::array<int, 3> divisions_{1, 1, 1};
  std::vector<Cell> cells_;
  std::vector<Face> faces_;
  double h_ = 0.0;
  std::uint64_t fingerprint_ = 0;
  std::vector<BoundaryTag> tags_;  // indexed by face, empty until tagged
  std::map<Side, BoundaryTag> side_tags_;
};

/// Uniform-per-axis box (0,L_1) x ... x (0,L_d) with the given subdivisions.
Mesh build_box_mesh(std::span<const double> extents, std::span<const int> divisions);

/// Copy of `mesh` with every boundary face classified according to `spec`.
/// Throws ConfigError if a side is missing.
Mesh tag_boundaries(const Mesh& mesh, const BoundarySpec& spec);

}  // namespace biot
