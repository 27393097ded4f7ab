#include "biot/fespace.hpp"

#include <algorithm>

#include "biot/errors.hpp"
#include "biot/timebasis.hpp"

namespace biot {

namespace {

double lag(const std::vector<double>& x, int k, double t) {
  double v = 1.0;
  for (int m = 0; m < static_cast<int>(x.size()); ++m)
    if (m != k) v *= (t - x[m]) / (x[k] - x[m]);
  return v;
}

double lag_d(const std::vector<double>& x, int k, double t) {
  const int n = static_cast<int>(x.size());
  double s = 0.0;
  for (int l = 0; l < n; ++l) {
    if (l == k) continue;
    double p = 1.0 / (x[k] - x[l]);
    for (int m = 0; m < n; ++m)
      if (m != k && m != l) p *= (t - x[m]) / (x[k] - x[m]);
    s += p;
  }
  return s;
}

std::vector<double> equispaced_nodes(int order) {
  if (order == 0) return {0.5};
  std::vector<double> n(order + 1);
  for (int i = 0; i <= order; ++i) n[i] = static_cast<double>(i) / order;
  return n;
}

Vec3 cell_size(const Mesh& mesh, int cell) {
  Vec3 h = Vec3::Ones();
  const Point s = mesh.cell(cell).size();
  for (int a = 0; a < mesh.dim(); ++a) h[a] = s[a];
  return h;
}

}  // namespace

CellQuadrature tensor_gauss(int dim, int n) {
  const QuadratureRule g = gauss_legendre(n);
  CellQuadrature q;
  const int nz = dim == 3 ? n : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        Point p = Point::Zero();
        p[0] = g.nodes[i];
        p[1] = g.nodes[j];
        double w = g.weights[i] * g.weights[j];
        if (dim == 3) {
          p[2] = g.nodes[k];
          w *= g.weights[k];
        }
        q.points.push_back(p);
        q.weights.push_back(w);
      }
  return q;
}

CellQuadrature face_gauss(int dim, Side side, int n) {
  const int a = side_axis(side);
  const double fixed = side_is_high(side) ? 1.0 : 0.0;
  CellQuadrature q;
  std::vector<int> tang;
  for (int b = 0; b < dim; ++b)
    if (b != a) tang.push_back(b);
  if (dim == 2) {
    const QuadratureRule g = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
      Point p = Point::Zero();
      p[a] = fixed;
      p[tang[0]] = g.nodes[i];
      q.points.push_back(p);
      q.weights.push_back(g.weights[i]);
    }
    return q;
  }
  const CellQuadrature sq = tensor_gauss(2, n);
  for (std::size_t i = 0; i < sq.size(); ++i) {
    Point p = Point::Zero();
    p[a] = fixed;
    p[tang[0]] = sq.points[i][0];
    p[tang[1]] = sq.points[i][1];
    q.points.push_back(p);
    q.weights.push_back(sq.weights[i]);
  }
  return q;
}

ScalarQ::ScalarQ(int dim, std::vector<double> nodes1d) : dim_(dim), nodes_(std::move(nodes1d)) {
  if (dim < 1 || dim > 3 || nodes_.empty()) throw InvalidArgument("bad scalar element");
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<int>(nodes_.size());
}

ScalarQ ScalarQ::equispaced(int dim, int order) {
  if (order < 0) throw InvalidArgument("element order must be >= 0");
  return ScalarQ(dim, equispaced_nodes(order));
}

std::array<int, 3> ScalarQ::multi_index(int i) const {
  const int n = static_cast<int>(nodes_.size());
  std::array<int, 3> idx{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    idx[a] = i % n;
    i /= n;
  }
  return idx;
}

Point ScalarQ::node(int i) const {
  const auto idx = multi_index(i);
  Point p = Point::Zero();
  for (int a = 0; a < dim_; ++a) p[a] = nodes_[idx[a]];
  return p;
}

double ScalarQ::v1(int k, double x) const { return lag(nodes_, k, x); }
double ScalarQ::d1(int k, double x) const { return lag_d(nodes_, k, x); }

double ScalarQ::value(int i, const Point& xh) const {
  const auto idx = multi_index(i);
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= v1(idx[a], xh[a]);
  return v;
}

Vec3 ScalarQ::gradient(int i, const Point& xh) const {
  const auto idx = multi_index(i);
  Vec3 g = Vec3::Zero();
  for (int a = 0; a < dim_; ++a) {
    double v = 1.0;
    for (int b = 0; b < dim_; ++b) v *= (a == b) ? d1(idx[b], xh[b]) : v1(idx[b], xh[b]);
    g[a] = v;
  }
  return g;
}

RaviartThomasQ::RaviartThomasQ(int dim, int k) : dim_(dim), k_(k) {
  if (dim < 2 || dim > 3) throw InvalidArgument("RT element needs dimension 2 or 3");
  if (k < 0) throw InvalidArgument("RT order must be >= 0");
  along_nodes_ = equispaced_nodes(k + 1);
  across_nodes_ = gauss_legendre(k + 1).nodes;
  per_face_ = 1;
  for (int b = 1; b < dim; ++b) per_face_ *= k + 1;
  int interior = 0;
  for (int a = 0; a < dim; ++a) {
    std::array<int, 3> n{1, 1, 1};
    for (int b = 0; b < dim; ++b) n[b] = (b == a) ? k + 2 : k + 1;
    for (int i2 = 0; i2 < n[2]; ++i2)
      for (int i1 = 0; i1 < n[1]; ++i1)
        for (int i0 = 0; i0 < n[0]; ++i0) {
          LocalDof d;
          d.component = a;
          d.index = {i0, i1, i2};
          for (int b = 0; b < dim; ++b) d.node[b] = (b == a) ? along_nodes_[d.index[b]] : across_nodes_[d.index[b]];
          if (d.index[a] == 0 || d.index[a] == k + 1) {
            d.side = make_side(a, d.index[a] == k + 1);
            int t = 0, stride = 1;
            for (int b = 0; b < dim; ++b)
              if (b != a) {
                t += d.index[b] * stride;
                stride *= k + 1;
              }
            d.tangential = t;
          } else {
            d.interior = interior++;
          }
          dofs_.push_back(d);
        }
  }
  n_interior_ = interior;
}

Vec3 RaviartThomasQ::value(int i, const Point& xh) const {
  const LocalDof& d = dofs_[i];
  double v = 1.0;
  for (int b = 0; b < dim_; ++b)
    v *= (b == d.component) ? lag(along_nodes_, d.index[b], xh[b]) : lag(across_nodes_, d.index[b], xh[b]);
  Vec3 out = Vec3::Zero();
  out[d.component] = v;
  return out;
}

double RaviartThomasQ::ref_divergence(int i, const Point& xh) const {
  const LocalDof& d = dofs_[i];
  double v = 1.0;
  for (int b = 0; b < dim_; ++b)
    v *= (b == d.component) ? lag_d(along_nodes_, d.index[b], xh[b]) : lag(across_nodes_, d.index[b], xh[b]);
  return v;
}

Vec3 contravariant_piola(const Vec3& h, int dim, const Vec3& vhat) {
  double det = 1.0;
  for (int a = 0; a < dim; ++a) det *= h[a];
  Vec3 out = Vec3::Zero();
  for (int a = 0; a < dim; ++a) out[a] = h[a] * vhat[a] / det;
  return out;
}

double piola_divergence(const Vec3& h, int dim, double ref_div) {
  double det = 1.0;
  for (int a = 0; a < dim; ++a) det *= h[a];
  return ref_div / det;
}

int DofMap::n_constrained() const {
  return static_cast<int>(std::count(constrained_.begin(), constrained_.end(), 1));
}

void DofMap::zero_constrained(Vector& v) const {
  for (int i = 0; i < n_dofs_; ++i)
    if (constrained_[i]) v[i] = 0.0;
}

double DofMap::eval_scalar(const Mesh&, int cell, const Point& xh, const Vector& c) const {
  if (kind_ != SpaceKind::Pressure) throw InvalidArgument("scalar evaluation needs a pressure space");
  const auto dofs = cell_dofs(cell);
  double v = 0.0;
  for (int i = 0; i < per_cell_; ++i) v += c[dofs[i]] * scalar_.value(i, xh);
  return v;
}

Vec3 DofMap::eval_vector(const Mesh&, int cell, const Point& xh, const Vector& c) const {
  const auto dofs = cell_dofs(cell);
  Vec3 v = Vec3::Zero();
  if (kind_ == SpaceKind::Displacement) {
    for (int n = 0; n < scalar_.size(); ++n) {
      const double s = scalar_.value(n, xh);
      for (int a = 0; a < dim_; ++a) v[a] += c[dofs[dim_ * n + a]] * s;
    }
  } else if (kind_ == SpaceKind::Flux) {
    for (int i = 0; i < per_cell_; ++i) v += sign(cell, i) * c[dofs[i]] * rt_.value(i, xh);
  } else {
    throw InvalidArgument("vector evaluation needs a displacement or flux space");
  }
  return v;
}

Mat3 DofMap::eval_gradient(const Mesh& mesh, int cell, const Point& xh, const Vector& c) const {
  if (kind_ != SpaceKind::Displacement) throw InvalidArgument("gradient evaluation needs a displacement space");
  const Vec3 h = cell_size(mesh, cell);
  const auto dofs = cell_dofs(cell);
  Mat3 G = Mat3::Zero();
  for (int n = 0; n < scalar_.size(); ++n) {
    const Vec3 g = scalar_.gradient(n, xh);
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b) G(a, b) += c[dofs[dim_ * n + a]] * g[b] / h[b];
  }
  return G;
}

double DofMap::eval_divergence(const Mesh& mesh, int cell, const Point& xh, const Vector& c) const {
  if (kind_ == SpaceKind::Displacement) return eval_gradient(mesh, cell, xh, c).trace();
  if (kind_ != SpaceKind::Flux) throw InvalidArgument("divergence evaluation needs a vector space");
  const Vec3 h = cell_size(mesh, cell);
  const auto dofs = cell_dofs(cell);
  double v = 0.0;
  for (int i = 0; i < per_cell_; ++i) v += sign(cell, i) * c[dofs[i]] * rt_.divergence(i, xh, h);
  return v;
}

DofMap build_displacement_space(const Mesh& mesh, int p) {
  if (p < 1 || p > 2) throw ConfigError("displacement order must be 1 or 2, got " + std::to_string(p));
  const int d = mesh.dim();
  DofMap m;
  m.kind_ = SpaceKind::Displacement;
  m.order_ = p;
  m.dim_ = d;
  m.fingerprint_ = mesh.fingerprint();
  m.scalar_ = ScalarQ::equispaced(d, p);
  const auto& n = mesh.divisions();
  std::array<int, 3> nn{1, 1, 1};
  for (int a = 0; a < d; ++a) nn[a] = n[a] * p + 1;
  const int n_nodes = nn[0] * nn[1] * nn[2];
  m.n_dofs_ = d * n_nodes;
  m.support_.resize(n_nodes);
  for (int k = 0; k < nn[2]; ++k)
    for (int j = 0; j < nn[1]; ++j)
      for (int i = 0; i < nn[0]; ++i) {
        const std::array<int, 3> idx{i, j, k};
        Point x = Point::Zero();
        for (int a = 0; a < d; ++a)
          x[a] = (idx[a] == nn[a] - 1) ? mesh.extents()[a] : mesh.spacing(a) * idx[a] / p;
        m.support_[i + nn[0] * (j + nn[1] * k)] = x;
      }
  const int loc_nodes = m.scalar_.size();
  m.per_cell_ = d * loc_nodes;
  m.cell_dofs_.resize(static_cast<std::size_t>(mesh.n_cells()) * m.per_cell_);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& ci = mesh.cell(c).index;
    for (int ln = 0; ln < loc_nodes; ++ln) {
      const auto li = m.scalar_.multi_index(ln);
      std::array<int, 3> g{0, 0, 0};
      for (int a = 0; a < d; ++a) g[a] = ci[a] * p + li[a];
      const int node = g[0] + nn[0] * (g[1] + nn[1] * g[2]);
      for (int a = 0; a < d; ++a) m.cell_dofs_[static_cast<std::size_t>(c) * m.per_cell_ + d * ln + a] = d * node + a;
    }
  }
  m.constrained_.assign(m.n_dofs_, 0);
  if (mesh.tagged()) {
    for (int k = 0; k < nn[2]; ++k)
      for (int j = 0; j < nn[1]; ++j)
        for (int i = 0; i < nn[0]; ++i) {
          const std::array<int, 3> idx{i, j, k};
          const int node = i + nn[0] * (j + nn[1] * k);
          for (int a = 0; a < d; ++a) {
            std::optional<Side> s;
            if (idx[a] == 0) s = make_side(a, false);
            if (idx[a] == nn[a] - 1) s = make_side(a, true);
            if (!s) continue;
            const BoundaryTag& t = mesh.side_tag(*s);
            for (int comp = 0; comp < d; ++comp)
              if (t.mech[comp] == MechBC::Dirichlet) m.constrained_[d * node + comp] = 1;
          }
        }
  }
  return m;
}

DofMap build_flux_space(const Mesh& mesh, int k) {
  if (k < 0 || k > 1) throw ConfigError("flux order must be 0 or 1, got " + std::to_string(k));
  const int d = mesh.dim();
  DofMap m;
  m.kind_ = SpaceKind::Flux;
  m.order_ = k;
  m.dim_ = d;
  m.fingerprint_ = mesh.fingerprint();
  m.rt_ = RaviartThomasQ(d, k);
  const int pf = m.rt_.dofs_per_face();
  const int ni = m.rt_.interior_dofs();
  const int n_face_dofs = mesh.n_faces() * pf;
  m.n_dofs_ = n_face_dofs + mesh.n_cells() * ni;
  m.per_cell_ = m.rt_.size();
  m.cell_dofs_.resize(static_cast<std::size_t>(mesh.n_cells()) * m.per_cell_);
  m.signs_.assign(m.cell_dofs_.size(), 1);
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int i = 0; i < m.per_cell_; ++i) {
      const auto& ld = m.rt_.dof(i);
      const int g = ld.side ? mesh.cell_face(c, *ld.side) * pf + ld.tangential : n_face_dofs + c * ni + ld.interior;
      m.cell_dofs_[static_cast<std::size_t>(c) * m.per_cell_ + i] = g;
    }
  m.constrained_.assign(m.n_dofs_, 0);
  if (mesh.tagged()) {
    for (int f = 0; f < mesh.n_faces(); ++f)
      if (mesh.face(f).is_boundary() && mesh.tag(f).flow == FlowBC::Flux)
        for (int t = 0; t < pf; ++t) m.constrained_[f * pf + t] = 1;
  }
  return m;
}

DofMap build_pressure_space(const Mesh& mesh, int k) {
  if (k < 0 || k > 1) throw ConfigError("pressure order must be 0 or 1, got " + std::to_string(k));
  DofMap m;
  m.kind_ = SpaceKind::Pressure;
  m.order_ = k;
  m.dim_ = mesh.dim();
  m.fingerprint_ = mesh.fingerprint();
  m.scalar_ = ScalarQ::equispaced(mesh.dim(), k);
  m.per_cell_ = m.scalar_.size();
  m.n_dofs_ = mesh.n_cells() * m.per_cell_;
  m.cell_dofs_.resize(m.n_dofs_);
  for (int i = 0; i < m.n_dofs_; ++i) m.cell_dofs_[i] = i;
  m.constrained_.assign(m.n_dofs_, 0);
  return m;
}

void check_compatible(const Mesh& mesh, const DofMap& map) {
  if (mesh.fingerprint() != map.mesh_fingerprint() || mesh.dim() != map.dim())
    throw InvalidArgument("dof map was built on a different mesh");
}

}  // namespace biot
