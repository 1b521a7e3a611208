#pragma once

#include "qdiff/tracer.hpp"
#include "qdiff/types.hpp"

namespace qdiff {

struct PolygonVertex {
  int order = 0;                // multiplicity of the singular point (>= -1)
  double interior_angle = 0.0;  // in [0, 2π]
};

struct PolygonData {
  std::vector<PolygonVertex> vertices;
  std::vector<int> interior_orders;  // multiplicities of singular points inside
};

// Sum_j (1 - θ_j (n_j+2) / 2π) - 2 - Sum_i n_i. Zero for a valid polygon
// bounded by trajectory arcs.
double teichmuller_residual(const PolygonData& p);

struct InteriorAngle {
  double angle = 0.0;  // snapped value when within threshold, else raw
  double raw = 0.0;
  bool snapped = false;
};

// Angle at `vertex` between the tangents of two edges meeting there, measured
// through the side containing `interior_witness`. Edge tangents come from the
// traced polylines; the result snaps to the nearest multiple of π/(order+2)
// when within 0.05 rad, since trajectory corners at a critical point are
// quantized. Throws EdgesDontMeet when an edge end is farther than
// meet_tolerance from the vertex.
InteriorAngle measure_interior_angle(const FactoredRational& q, Complex vertex,
                                     const Trajectory& edge_in,
                                     const Trajectory& edge_out,
                                     Complex interior_witness, double meet_tolerance);

}  // namespace qdiff
