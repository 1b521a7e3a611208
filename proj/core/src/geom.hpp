#pragma once

// Internal planar-geometry helpers shared by the tracer, detector and period
// integrators. Not installed.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "qdiff/types.hpp"

namespace qdiff::detail {

inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

inline double point_segment_distance(Complex p, Complex a, Complex b, double* t_out = nullptr) {
  Complex d = b - a;
  double len2 = std::norm(d);
  double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  if (t_out) *t_out = t;
  return std::abs(p - (a + t * d));
}

inline double segment_segment_distance(Complex a0, Complex a1, Complex b0, Complex b1) {
  // Proper intersection means distance zero.
  double d1 = cross(a1 - a0, b0 - a0);
  double d2 = cross(a1 - a0, b1 - a0);
  double d3 = cross(b1 - b0, a0 - b0);
  double d4 = cross(b1 - b0, a1 - b0);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return 0.0;
  double m = point_segment_distance(a0, b0, b1);
  m = std::min(m, point_segment_distance(a1, b0, b1));
  m = std::min(m, point_segment_distance(b0, a0, a1));
  m = std::min(m, point_segment_distance(b1, a0, a1));
  return m;
}

// Proper transversal intersection point of two segments, if any.
inline std::optional<Complex> segment_intersection(Complex a0, Complex a1, Complex b0,
                                                   Complex b1, double* t_on_a = nullptr) {
  Complex r = a1 - a0, s = b1 - b0;
  double denom = cross(r, s);
  if (denom == 0.0) return std::nullopt;
  double t = cross(b0 - a0, s) / denom;
  double u = cross(b0 - a0, r) / denom;
  if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) return std::nullopt;
  if (t_on_a) *t_on_a = t;
  return a0 + t * r;
}

// Number of transversal crossings of segment [p, q] with a polyline.
// Returns nullopt on a degenerate configuration (endpoint on the polyline,
// collinear overlap); callers nudge and retry.
inline std::optional<int> count_crossings(Complex p, Complex q,
                                          std::span<const Complex> polyline) {
  int count = 0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    Complex a = polyline[i], b = polyline[i + 1];
    Complex r = q - p, s = b - a;
    double denom = cross(r, s);
    double t = 0.0, u = 0.0;
    if (denom == 0.0) {
      // Parallel: degenerate only if they actually touch.
      if (std::abs(cross(a - p, r)) <= 1e-15 * (std::abs(r) + std::abs(s)) &&
          point_segment_distance(a, p, q) == 0.0)
        return std::nullopt;
      continue;
    }
    t = cross(a - p, s) / denom;
    u = cross(a - p, r) / denom;
    const double edge = 1e-12;
    if (t > -edge && t < 1.0 + edge && u > -edge && u < 1.0 + edge) {
      if (t < edge || t > 1.0 - edge || u < edge || u > 1.0 - edge)
        return std::nullopt;  // grazing an endpoint
      ++count;
    }
  }
  return count;
}

inline double point_polyline_distance(Complex p, std::span<const Complex> poly) {
  if (poly.empty()) return std::numeric_limits<double>::infinity();
  if (poly.size() == 1) return std::abs(p - poly[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < poly.size(); ++i)
    best = std::min(best, point_segment_distance(p, poly[i], poly[i + 1]));
  return best;
}

// Left-normal offset of a polyline (negative eps offsets to the right).
inline std::vector<Complex> offset_polyline(std::span<const Complex> v, double eps) {
  std::vector<Complex> out(v.size());
  if (v.size() < 2) {
    out.assign(v.begin(), v.end());
    return out;
  }
  auto seg_normal = [&](std::size_t i) {
    Complex d = v[i + 1] - v[i];
    double len = std::abs(d);
    return len > 0.0 ? Complex(0.0, 1.0) * d / len : Complex(0.0, 0.0);
  };
  for (std::size_t i = 0; i < v.size(); ++i) {
    Complex n;
    if (i == 0)
      n = seg_normal(0);
    else if (i + 1 == v.size())
      n = seg_normal(v.size() - 2);
    else {
      n = seg_normal(i - 1) + seg_normal(i);
      double len = std::abs(n);
      n = len > 1e-12 ? n / len : seg_normal(i);
    }
    out[i] = v[i] + eps * n;
  }
  return out;
}

inline double wrap_angle(double a) {
  const double two_pi = 6.283185307179586476925286766559;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

// Absolute angular difference in [0, π].
inline double angle_difference(double a, double b) {
  const double two_pi = 6.283185307179586476925286766559;
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return d > two_pi / 2.0 ? two_pi - d : d;
}

}  // namespace qdiff::detail
