#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qdiff/algebra.hpp"
#include "qdiff/types.hpp"

namespace qdiff {

enum class FoliationKind { Horizontal, Vertical };

struct TraceOptions {
  // Non-positive fields are replaced by scale-free defaults derived from q:
  // S = max(1, max |critical point|), hit_radius = 1e-4 S,
  // escape_radius = 10 S + 10, and max_phi_length large enough to reach the
  // escape circle in the phi metric.
  double hit_radius = 0.0;
  double escape_radius = 0.0;
  double max_phi_length = 0.0;
  int max_steps = 200000;
  double rel_tol = 1e-9;
  // Euclidean step cap factor: |dz| <= max_step_scale * (1 + |z|). Keeps the
  // stored polyline a faithful sample of the smooth trajectory.
  double max_step_scale = 0.04;

  TraceOptions resolved_for(const FactoredRational& q) const;
};

enum class TerminationKind { HitCriticalPoint, EscapedToInfinity, ClosedLoop, Budget };

struct Termination {
  TerminationKind kind = TerminationKind::Budget;
  Complex point{0.0, 0.0};   // HitCriticalPoint: the critical point reached
  int direction_index = -1;  // EscapedToInfinity: nearest asymptotic direction
                             // (-1 when infinity is not a pole of order >= 3)
};

struct Trajectory {
  std::vector<Complex> vertices;
  std::vector<Complex> sqrt_values;  // branch-continued sqrt(q) per vertex
  double phi_length = 0.0;
  Termination termination;
  FoliationKind kind = FoliationKind::Horizontal;
};

// Directions of the order+2 rays emanating from a finite critical point (one
// ray for a simple pole), sorted in [0, 2π). Adjacent horizontal rays are
// 2π/(order+2) apart; the vertical family is shifted by π/(order+2).
std::vector<double> emanation_directions(const LocalData& d, FoliationKind kind);

// The p-2 critical directions at infinity when infinity is a pole of order
// p = degree_at_infinity + 4 >= 3; throws NotHigherOrderPole otherwise.
std::vector<double> asymptotic_directions(const FactoredRational& q);
std::vector<double> asymptotic_directions(const FactoredRational& q, FoliationKind kind);

// Integrates dz/ds = ±1/sqrt(q) (rotated by i for the vertical foliation) in
// the phi-arclength parameterization, with branch-continued sqrt(q).
Trajectory trace(const FactoredRational& q, Complex start, double direction,
                 const TraceOptions& opts, FoliationKind kind);

// ∫ sqrt|q| |dz| along a polyline, by adaptive quadrature (relative 1e-8).
double phi_length(const FactoredRational& q, std::span<const Complex> polyline);

struct GraphRay {
  int source = -1;     // index into CriticalGraph::points
  int emanation = -1;  // ray index at the source, in sorted direction order
  Trajectory trajectory;
};

struct CriticalGraph {
  std::vector<CriticalPoint> points;  // all finite critical points
  std::vector<int> sources;           // indices of points that emanate rays
  std::vector<GraphRay> rays;
  // Unordered point-index pairs -> indices of rays joining them.
  std::map<std::pair<int, int>, std::vector<int>> adjacency;

  int point_index(Complex p, double tol) const;  // -1 when absent
  bool connected(Complex a, Complex b, double tol) const;
};

CriticalGraph critical_graph(const FactoredRational& q, const TraceOptions& opts);

}  // namespace qdiff
