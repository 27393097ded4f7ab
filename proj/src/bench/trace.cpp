#include "biot/bench/trace.hpp"

#include <cmath>

#include "biot/errors.hpp"

namespace biot::bench {

std::vector<double> TraceSeries::pressures() const {
  std::vector<double> v;
  v.reserve(records.size());
  for (const auto& r : records) v.push_back(r.pressure);
  return v;
}

double line_average_pressure(const Mesh& mesh, const DofMap& dp, const Vector& p, const LineSpec& line) {
  if (line.samples < 1) throw InvalidArgument("line needs at least one sample");
  if (p.size() != dp.n_dofs()) throw InvalidArgument("pressure vector length mismatch");
  double sum = 0.0;
  for (int k = 0; k < line.samples; ++k) {
    const double s = (k + 0.5) / line.samples;
    const Point x = line.from + s * (line.to - line.from);
    const auto cell = mesh.locate(x);
    if (!cell) throw InvalidArgument("trace line leaves the domain");
    sum += dp.eval_scalar(mesh, *cell, mesh.to_reference(*cell, x), p);
  }
  return sum / line.samples;
}

double oscillation_metric(const TraceSeries& trace, std::size_t k) {
  if (k > trace.size()) throw InvalidArgument("oscillation window exceeds trace length");
  double tv = 0.0;
  for (std::size_t i = 1; i < k; ++i) tv += std::abs(trace.records[i].pressure - trace.records[i - 1].pressure);
  return tv;
}

double relative_l2_difference(const TraceSeries& a, const TraceSeries& b, double t_max) {
  const std::size_t n = std::min(a.size(), b.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (b.records[i].time > t_max * (1.0 + 1e-12)) break;
    if (std::abs(a.records[i].time - b.records[i].time) > 1e-12 * (1.0 + std::abs(b.records[i].time)))
      throw InvalidArgument("traces are sampled at different times");
    const double d = a.records[i].pressure - b.records[i].pressure;
    num += d * d;
    den += b.records[i].pressure * b.records[i].pressure;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace biot::bench
