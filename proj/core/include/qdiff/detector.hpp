#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "qdiff/tracer.hpp"

namespace qdiff {

// Crossing parities of an arc against fixed cuts, one bit per finite pole.
// Cuts are vertical rays running downward from each pole; poles are taken in
// sorted (re, im) order so signatures of different arcs are comparable.
struct HomotopySignature {
  std::vector<std::uint8_t> parities;
  bool operator==(const HomotopySignature&) const = default;
};

struct ShortTrajectoryReport {
  bool found = false;
  bool resolved = false;  // false when rays ran out of budget or the distance
                          // gap band could not be closed by refinement
  double distance = 0.0;  // min_distance(gamma_a, gamma_b)
  std::optional<Trajectory> trajectory;  // present iff found
  std::optional<bool> unbroken;          // present iff found
  std::optional<HomotopySignature> signature;
  double hit_radius_used = 0.0;
};

// The order+2 horizontal rays emanating from a zero of q.
std::vector<Trajectory> gamma_set(const FactoredRational& q, Complex zero,
                                  const TraceOptions& opts);

// Euclidean distance between two ray families, exact over polyline segments.
double min_distance(std::span<const Trajectory> a, std::span<const Trajectory> b);

// Finite poles of q in sorted (re, im) order; the signature bit order.
std::vector<Complex> sorted_poles(const FactoredRational& q);

HomotopySignature homotopy_signature(std::span<const Complex> arc,
                                     std::span<const Complex> poles);

// Existence certificate for a trajectory joining two zeros: found iff a ray
// of one zero terminates at the other. The distance is always reported; when
// no hit is found and the distance falls inside the ambiguous band
// (2, 10] * hit_radius, the search is retried with a smaller hit radius.
ShortTrajectoryReport find_short_trajectory(const FactoredRational& q, Complex a,
                                            Complex b, const TraceOptions& opts);

// Composite-path witness used when the connection fails: follows a ray from
// `a` to its closest approach to `b`, then returns to `b` along a vertical
// trajectory. Returns the integral of sqrt(-q) along the composite; its real
// part vanishes only when the composite degenerates to a genuine trajectory.
Complex orthogonal_obstruction(const FactoredRational& q, Complex a, Complex b,
                               const TraceOptions& opts);

}  // namespace qdiff
