#pragma once

#include <string>
#include <vector>

#include "biot/fespace.hpp"
#include "biot/mesh.hpp"

namespace biot::bench {

struct TraceRecord {
  double time = 0.0;
  double pressure = 0.0;
  int iterations = 0;
  double wall_seconds = 0.0;
};

struct TraceSeries {
  std::string label;
  std::vector<TraceRecord> records;

  std::size_t size() const { return records.size(); }
  std::vector<double> pressures() const;
};

/// Straight segment from `from` to `to`, sampled at `samples` midpoints.
struct LineSpec {
  Point from = Point::Zero();
  Point to = Point::Zero();
  int samples = 101;
};

/// Composite-midpoint average of a pressure field along a line.
double line_average_pressure(const Mesh& mesh, const DofMap& dp, const Vector& p, const LineSpec& line);

/// Total variation over the first k records.
double oscillation_metric(const TraceSeries& trace, std::size_t k);

/// sqrt(sum (a-b)^2 / sum b^2) over records with time <= t_max (matched by index).
double relative_l2_difference(const TraceSeries& a, const TraceSeries& b, double t_max);

}  // namespace biot::bench
