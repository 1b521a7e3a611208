#include "qdiff/polygon.hpp"

#include <cmath>
#include <numbers>

#include "geom.hpp"
#include "qdiff/errors.hpp"

namespace qdiff {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// Tangent direction of a trajectory at the end meeting `vertex`, pointing
// away from the vertex. Uses the first polyline point clear of the meeting
// tolerance so arrival noise inside the hit ball does not skew the angle.
double edge_tangent(const Trajectory& edge, Complex vertex, double tol) {
  const auto& v = edge.vertices;
  if (v.empty()) throw EdgesDontMeet("measure_interior_angle: empty edge");
  bool at_front = std::abs(v.front() - vertex) <= std::abs(v.back() - vertex);
  double end_gap = at_front ? std::abs(v.front() - vertex) : std::abs(v.back() - vertex);
  if (end_gap > tol) throw EdgesDontMeet("measure_interior_angle: edge does not reach vertex");
  if (at_front) {
    for (const Complex& p : v)
      if (std::abs(p - vertex) >= 8.0 * tol) return std::arg(p - vertex);
    return std::arg(v.back() - vertex);
  }
  for (auto it = v.rbegin(); it != v.rend(); ++it)
    if (std::abs(*it - vertex) >= 8.0 * tol) return std::arg(*it - vertex);
  return std::arg(v.front() - vertex);
}
}  // namespace

double teichmuller_residual(const PolygonData& p) {
  double lhs = 0.0;
  for (const auto& v : p.vertices)
    lhs += 1.0 - v.interior_angle * (v.order + 2) / kTwoPi;
  int interior = 0;
  for (int n : p.interior_orders) interior += n;
  return lhs - 2.0 - interior;
}

InteriorAngle measure_interior_angle(const FactoredRational& q, Complex vertex,
                                     const Trajectory& edge_in, const Trajectory& edge_out,
                                     Complex interior_witness, double meet_tolerance) {
  double alpha = edge_tangent(edge_in, vertex, meet_tolerance);
  double beta = edge_tangent(edge_out, vertex, meet_tolerance);
  double witness_dir = std::arg(interior_witness - vertex);

  // Two sectors between the tangents; keep the one holding the witness.
  double ccw = detail::wrap_angle(beta - alpha);
  double to_witness = detail::wrap_angle(witness_dir - alpha);
  double raw = to_witness <= ccw ? ccw : kTwoPi - ccw;

  InteriorAngle out;
  out.raw = raw;
  out.angle = raw;
  LocalData ld = local_data(q, SpherePoint(vertex));
  if (ld.order >= -1) {
    double unit = kPi / (ld.order + 2);
    double k = std::round(raw / unit);
    if (std::abs(raw - k * unit) <= 0.05) {
      out.angle = k * unit;
      out.snapped = true;
    }
  }
  return out;
}

}  // namespace qdiff
