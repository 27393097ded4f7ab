#include "biot/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "biot/errors.hpp"

namespace biot {

namespace {

constexpr std::string_view kSideNames[6] = {"x-", "x+", "y-", "y+", "z-", "z+"};

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

std::string_view side_name(Side s) { return kSideNames[static_cast<int>(s)]; }

std::optional<Side> parse_side(std::string_view name) {
  for (int i = 0; i < 6; ++i)
    if (kSideNames[i] == name) return static_cast<Side>(i);
  return std::nullopt;
}

BoundaryTag BoundarySpec::roller(Side s, FlowBC flow) {
  BoundaryTag t;
  t.flow = flow;
  t.mech[side_axis(s)] = MechBC::Dirichlet;
  return t;
}

BoundaryTag BoundarySpec::clamped(FlowBC flow) {
  BoundaryTag t;
  t.flow = flow;
  t.mech = {MechBC::Dirichlet, MechBC::Dirichlet, MechBC::Dirichlet};
  return t;
}

BoundaryTag BoundarySpec::free(FlowBC flow) {
  BoundaryTag t;
  t.flow = flow;
  return t;
}

int Face::incidence(int cell) const {
  if (cell == lower_cell) return 1;
  if (cell == upper_cell) return -1;
  return 0;
}

int Mesh::cell_id(const std::array<int, 3>& idx) const {
  return idx[0] + divisions_[0] * (idx[1] + divisions_[1] * idx[2]);
}

std::optional<int> Mesh::locate(const Point& x, double tol) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    const double L = extents_[a];
    if (x[a] < -tol * L || x[a] > L * (1.0 + tol)) return std::nullopt;
    const double s = x[a] / spacing(a);
    int i = static_cast<int>(std::ceil(s)) - 1;
    if (i < 0) i = 0;
    if (i >= divisions_[a]) i = divisions_[a] - 1;
    idx[a] = i;
  }
  return cell_id(idx);
}

Point Mesh::to_reference(int c, const Point& x) const {
  const Cell& cl = cells_[c];
  Point r = Point::Zero();
  for (int a = 0; a < dim_; ++a) r[a] = (x[a] - cl.lower[a]) / (cl.upper[a] - cl.lower[a]);
  return r;
}

Point Mesh::to_physical(int c, const Point& xhat) const {
  const Cell& cl = cells_[c];
  Point x = Point::Zero();
  for (int a = 0; a < dim_; ++a) x[a] = cl.lower[a] + xhat[a] * (cl.upper[a] - cl.lower[a]);
  return x;
}

const BoundaryTag& Mesh::tag(int f) const {
  if (tags_.empty()) throw InvalidArgument("mesh has no boundary tags");
  if (!faces_[f].boundary) throw InvalidArgument("face " + std::to_string(f) + " is interior");
  return tags_[f];
}

const BoundaryTag& Mesh::side_tag(Side s) const {
  auto it = side_tags_.find(s);
  if (it == side_tags_.end()) throw InvalidArgument("mesh has no tag for side " + std::string(side_name(s)));
  return it->second;
}

Mesh build_box_mesh(std::span<const double> extents, std::span<const int> divisions) {
  if (extents.size() != divisions.size() || extents.size() < 2 || extents.size() > 3)
    throw InvalidArgument("mesh needs 2 or 3 extents with matching divisions");
  Mesh m;
  m.dim_ = static_cast<int>(extents.size());
  const int d = m.dim_;
  for (int a = 0; a < d; ++a) {
    if (!(extents[a] > 0.0) || !std::isfinite(extents[a]))
      throw InvalidArgument("extent along axis " + std::to_string(a) + " must be positive");
    if (divisions[a] < 1)
      throw InvalidArgument("divisions along axis " + std::to_string(a) + " must be >= 1");
    m.extents_[a] = extents[a];
    m.divisions_[a] = divisions[a];
  }
  const auto& n = m.divisions_;
  const int nc = n[0] * n[1] * n[2];

  // Face numbering: axis-major, lexicographic (x fastest) within each axis.
  std::array<int, 3> face_offset{0, 0, 0};
  std::array<std::array<int, 3>, 3> face_dims{};
  int nf = 0;
  for (int a = 0; a < d; ++a) {
    face_offset[a] = nf;
    for (int b = 0; b < 3; ++b) face_dims[a][b] = n[b] + (a == b ? 1 : 0);
    nf += face_dims[a][0] * face_dims[a][1] * face_dims[a][2];
  }
  auto face_id = [&](int a, int i, int j, int k) {
    const auto& fd = face_dims[a];
    return face_offset[a] + i + fd[0] * (j + fd[1] * k);
  };

  m.cells_.resize(nc);
  m.faces_.resize(nf);
  double hmax = 0.0;
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) {
        std::array<int, 3> idx{i, j, k};
        Cell& c = m.cells_[m.cell_id(idx)];
        c.index = idx;
        double vol = 1.0, diam2 = 0.0;
        for (int a = 0; a < d; ++a) {
          const double hs = m.spacing(a);
          c.lower[a] = idx[a] * hs;
          c.upper[a] = (idx[a] + 1 == n[a]) ? m.extents_[a] : (idx[a] + 1) * hs;
          const double len = c.upper[a] - c.lower[a];
          vol *= len;
          diam2 += len * len;
        }
        c.volume = vol;
        c.diameter = std::sqrt(diam2);
        hmax = std::max(hmax, c.diameter);
        for (int a = 0; a < d; ++a) {
          std::array<int, 3> lo = idx, hi = idx;
          hi[a] += 1;
          c.faces[2 * a] = face_id(a, lo[0], lo[1], lo[2]);
          c.faces[2 * a + 1] = face_id(a, hi[0], hi[1], hi[2]);
        }
      }
  m.h_ = hmax;

  for (int a = 0; a < d; ++a) {
    const auto& fd = face_dims[a];
    for (int k = 0; k < fd[2]; ++k)
      for (int j = 0; j < fd[1]; ++j)
        for (int i = 0; i < fd[0]; ++i) {
          std::array<int, 3> idx{i, j, k};
          Face& f = m.faces_[face_id(a, i, j, k)];
          f.axis = a;
          double area = 1.0;
          for (int b = 0; b < d; ++b) {
            if (b == a) {
              f.center[b] = (idx[b] == n[b]) ? m.extents_[b] : idx[b] * m.spacing(b);
            } else {
              const double lo = idx[b] * m.spacing(b);
              const double hi = (idx[b] + 1 == n[b]) ? m.extents_[b] : (idx[b] + 1) * m.spacing(b);
              f.center[b] = 0.5 * (lo + hi);
              area *= hi - lo;
            }
          }
          f.area = area;
          if (idx[a] > 0) {
            std::array<int, 3> c = idx;
            c[a] -= 1;
            f.lower_cell = m.cell_id(c);
          }
          if (idx[a] < n[a]) f.upper_cell = m.cell_id(idx);
          if (idx[a] == 0) f.boundary = make_side(a, false);
          if (idx[a] == n[a]) f.boundary = make_side(a, true);
        }
  }

  std::uint64_t h = static_cast<std::uint64_t>(d);
  for (int a = 0; a < d; ++a) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(double));
    std::memcpy(&bits, &m.extents_[a], sizeof bits);
    h = mix(h, bits);
    h = mix(h, static_cast<std::uint64_t>(n[a]));
  }
  m.fingerprint_ = h;
  return m;
}

Mesh tag_boundaries(const Mesh& mesh, const BoundarySpec& spec) {
  std::ostringstream missing;
  for (int s = 0; s < 2 * mesh.dim(); ++s)
    if (!spec.sides.count(static_cast<Side>(s))) missing << " " << kSideNames[s];
  if (!missing.str().empty()) throw ConfigError("boundary specification misses sides:" + missing.str());
  Mesh m = mesh;
  m.side_tags_.clear();
  for (int s = 0; s < 2 * mesh.dim(); ++s) m.side_tags_[static_cast<Side>(s)] = spec.sides.at(static_cast<Side>(s));
  m.tags_.assign(m.faces_.size(), BoundaryTag{});
  for (std::size_t f = 0; f < m.faces_.size(); ++f)
    if (m.faces_[f].boundary) m.tags_[f] = m.side_tags_.at(*m.faces_[f].boundary);
  return m;
}

}  // namespace biot
