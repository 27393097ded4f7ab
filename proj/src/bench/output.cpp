#include "biot/bench/output.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include "biot/errors.hpp"

namespace biot::bench {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const TraceSeries& trace) {
  os << "time,pressure_line_avg,iterations,wall_seconds\n";
  for (const auto& r : trace.records)
    os << format_double(r.time) << ',' << format_double(r.pressure) << ',' << r.iterations << ','
       << format_double(r.wall_seconds) << '\n';
}

void write_convergence_log(std::ostream& os, const std::vector<SlabLog>& log) {
  for (const auto& l : log)
    os << "slab=" << l.slab << " t=" << format_double(l.t_end) << " scheme=" << l.scheme << " iterations=" << l.iterations
       << " change_p=" << format_double(l.change_p) << " change_u=" << format_double(l.change_u)
       << " mass_residual=" << format_double(l.mass_residual) << '\n';
}

void write_timing_table(std::ostream& os, const std::vector<TimingRow>& rows) {
  std::size_t w = 6;
  for (const auto& r : rows) w = std::max(w, r.scheme.size());
  os << std::left << std::setw(static_cast<int>(w) + 2) << "scheme" << std::right << std::setw(7) << "blocks"
     << std::setw(8) << "slabs" << std::setw(12) << "iterations" << std::setw(14) << "wall_s" << "  status\n";
  for (const auto& r : rows) {
    char t[32];
    std::snprintf(t, sizeof t, "%.3f", r.wall_seconds);
    os << std::left << std::setw(static_cast<int>(w) + 2) << r.scheme << std::right << std::setw(7) << r.unknown_blocks
       << std::setw(8) << r.slabs << std::setw(12) << r.iterations << std::setw(14) << t << "  " << r.status << '\n';
  }
}

void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows) {
  os << "scheme,unknown_blocks,slabs,iterations,wall_seconds,status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    os << r.scheme << ',' << r.unknown_blocks << ',' << r.slabs << ',' << r.iterations << ','
       << format_double(r.wall_seconds) << ',' << status << '\n';
  }
}

void write_convergence_report(std::ostream& os, const ConvergenceReport& rep) {
  os << "# " << rep.study << "\n";
  os << "parameter,err_u,err_p,err_q\n";
  for (std::size_t i = 0; i < rep.parameter.size(); ++i)
    os << format_double(rep.parameter[i]) << ',' << format_double(rep.err_u[i]) << ',' << format_double(rep.err_p[i])
       << ',' << format_double(rep.err_q[i]) << '\n';
  os << "order_u=" << format_double(rep.order_u) << " order_p=" << format_double(rep.order_p)
     << " order_q=" << format_double(rep.order_q) << '\n';
}

void write_vtk(std::ostream& os, const BiotProblem& pb, const SlabInit& state, double time) {
  const Mesh& mesh = pb.mesh();
  const int d = mesh.dim();
  std::array<int, 3> nv{1, 1, 1};
  for (int a = 0; a < d; ++a) nv[a] = mesh.divisions()[a] + 1;
  const int npts = nv[0] * nv[1] * nv[2];

  os << "# vtk DataFile Version 3.0\n";
  os << "biot t=" << format_double(time) << "\n";
  os << "ASCII\nDATASET STRUCTURED_GRID\n";
  os << "DIMENSIONS " << nv[0] << ' ' << nv[1] << ' ' << nv[2] << '\n';
  os << "POINTS " << npts << " double\n";

  std::vector<Vec3> disp;
  disp.reserve(npts);
  for (int k = 0; k < nv[2]; ++k)
    for (int j = 0; j < nv[1]; ++j)
      for (int i = 0; i < nv[0]; ++i) {
        const std::array<int, 3> v{i, j, k};
        std::array<int, 3> c{0, 0, 0};
        Point xh = Point::Zero();
        Point x = Point::Zero();
        for (int a = 0; a < d; ++a) {
          c[a] = std::min(v[a], mesh.divisions()[a] - 1);
          xh[a] = v[a] - c[a];
          x[a] = v[a] * mesh.spacing(a);
        }
        os << format_double(x[0]) << ' ' << format_double(x[1]) << ' ' << format_double(x[2]) << '\n';
        disp.push_back(pb.du().eval_vector(mesh, mesh.cell_id(c), xh, state.u));
      }

  os << "POINT_DATA " << npts << "\nVECTORS displacement double\n";
  for (const auto& u : disp) os << format_double(u[0]) << ' ' << format_double(u[1]) << ' ' << format_double(u[2]) << '\n';

  const CellQuadrature q = tensor_gauss(d, pb.dp().order() + 1);
  os << "CELL_DATA " << mesh.n_cells() << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < mesh.n_cells(); ++c) {
    double avg = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) avg += q.weights[k] * pb.dp().eval_scalar(mesh, c, q.points[k], state.p);
    os << format_double(avg) << '\n';
  }
}

void prepare_output(const std::filesystem::path& dir, const std::vector<std::string>& files, bool force) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output.directory: cannot create " + dir.string() + ": " + ec.message());
  if (force) return;
  std::string clash;
  for (const auto& f : files)
    if (std::filesystem::exists(dir / f)) clash += (clash.empty() ? "" : ", ") + f;
  if (!clash.empty()) throw ConfigError("output.directory: refusing to overwrite " + clash + " (use --force)");
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  body(os);
  if (!os) throw Error("write to " + path.string() + " failed");
}

}  // namespace biot::bench
