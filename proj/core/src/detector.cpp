#include "qdiff/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geom.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/periods.hpp"

namespace qdiff {

namespace {

bool is_zero_of(const FactoredRational& q, Complex z) {
  for (const auto& f : q.factors())
    if (f.multiplicity > 0 && std::abs(z - f.root) <= 1e-12 * (1.0 + std::abs(f.root)))
      return true;
  return false;
}

bool same_point(Complex a, Complex b) {
  return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b));
}

}  // namespace

std::vector<Trajectory> gamma_set(const FactoredRational& q, Complex zero,
                                  const TraceOptions& opts) {
  if (!is_zero_of(q, zero)) throw NotAZero("gamma_set: point is not a zero of q");
  LocalData ld = local_data(q, SpherePoint(zero));
  auto dirs = emanation_directions(ld, FoliationKind::Horizontal);
  std::vector<Trajectory> rays;
  rays.reserve(dirs.size());
  for (double d : dirs) rays.push_back(trace(q, zero, d, opts, FoliationKind::Horizontal));
  return rays;
}

double min_distance(std::span<const Trajectory> a, std::span<const Trajectory> b) {
  double best = std::numeric_limits<double>::infinity();
  for (const Trajectory& ta : a) {
    for (const Trajectory& tb : b) {
      const auto& va = ta.vertices;
      const auto& vb = tb.vertices;
      for (std::size_t i = 0; i + 1 < va.size() && best > 0.0; ++i) {
        Complex a0 = va[i], a1 = va[i + 1];
        double lo_x = std::min(a0.real(), a1.real()) - best;
        double hi_x = std::max(a0.real(), a1.real()) + best;
        double lo_y = std::min(a0.imag(), a1.imag()) - best;
        double hi_y = std::max(a0.imag(), a1.imag()) + best;
        for (std::size_t j = 0; j + 1 < vb.size(); ++j) {
          Complex b0 = vb[j], b1 = vb[j + 1];
          if (std::max(b0.real(), b1.real()) < lo_x || std::min(b0.real(), b1.real()) > hi_x ||
              std::max(b0.imag(), b1.imag()) < lo_y || std::min(b0.imag(), b1.imag()) > hi_y)
            continue;
          best = std::min(best, detail::segment_segment_distance(a0, a1, b0, b1));
          if (best == 0.0) break;
        }
      }
      // Single-vertex degenerate polylines still contribute their point.
      if (va.size() == 1)
        for (std::size_t j = 0; j + 1 < vb.size(); ++j)
          best = std::min(best, detail::point_segment_distance(va[0], vb[j], vb[j + 1]));
      if (vb.size() == 1)
        for (std::size_t i = 0; i + 1 < va.size(); ++i)
          best = std::min(best, detail::point_segment_distance(vb[0], va[i], va[i + 1]));
      if (va.size() == 1 && vb.size() == 1) best = std::min(best, std::abs(va[0] - vb[0]));
    }
  }
  return best;
}

std::vector<Complex> sorted_poles(const FactoredRational& q) {
  std::vector<Complex> poles = q.poles();
  std::sort(poles.begin(), poles.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return poles;
}

HomotopySignature homotopy_signature(std::span<const Complex> arc,
                                     std::span<const Complex> poles) {
  double scale = 1.0;
  for (Complex v : arc) scale = std::max(scale, std::abs(v));
  for (Complex p : poles) {
    scale = std::max(scale, std::abs(p));
    for (std::size_t i = 0; i + 1 < arc.size(); ++i)
      if (detail::point_segment_distance(p, arc[i], arc[i + 1]) <= 1e-12 * scale)
        throw ArcThroughPole("homotopy_signature: arc passes through a pole");
  }

  HomotopySignature sig;
  sig.parities.reserve(poles.size());
  for (Complex p : poles) {
    // Cut: vertical ray straight down from the pole; nudge it when a vertex
    // sits on the cut line so every crossing is transversal.
    double cut_x = p.real();
    for (int tries = 0; tries < 50; ++tries) {
      bool clean = true;
      for (Complex v : arc)
        if (std::abs(v.real() - cut_x) <= 1e-12 * scale) {
          clean = false;
          break;
        }
      if (clean) break;
      cut_x += 1e-9 * scale;
    }
    int crossings = 0;
    for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
      double x0 = arc[i].real() - cut_x, x1 = arc[i + 1].real() - cut_x;
      if ((x0 < 0.0) == (x1 < 0.0)) continue;
      double t = x0 / (x0 - x1);
      double y = arc[i].imag() + t * (arc[i + 1].imag() - arc[i].imag());
      if (y < p.imag()) ++crossings;
    }
    sig.parities.push_back(static_cast<std::uint8_t>(crossings & 1));
  }
  return sig;
}

namespace {

// Does the polyline pass within `radius` of any finite critical point other
// than the two endpoints?
bool passes_near_other_critical(const FactoredRational& q, const Trajectory& t, Complex a,
                                Complex b, double radius) {
  for (const auto& f : q.factors()) {
    if (same_point(f.root, a) || same_point(f.root, b)) continue;
    for (std::size_t i = 0; i + 1 < t.vertices.size(); ++i)
      if (detail::point_segment_distance(f.root, t.vertices[i], t.vertices[i + 1]) < radius)
        return true;
  }
  return false;
}

const Trajectory* find_connecting_ray(std::span<const Trajectory> rays, Complex target,
                                      double tol) {
  for (const Trajectory& r : rays)
    if (r.termination.kind == TerminationKind::HitCriticalPoint &&
        std::abs(r.termination.point - target) <= tol)
      return &r;
  return nullptr;
}

bool all_resolved(std::span<const Trajectory> rays) {
  for (const Trajectory& r : rays)
    if (r.termination.kind == TerminationKind::Budget) return false;
  return true;
}

}  // namespace

ShortTrajectoryReport find_short_trajectory(const FactoredRational& q, Complex a, Complex b,
                                            const TraceOptions& opts_in) {
  if (!is_zero_of(q, a) || !is_zero_of(q, b))
    throw NotAZero("find_short_trajectory: endpoints must be zeros of q");
  if (same_point(a, b)) throw ZerosCoincide("find_short_trajectory: zeros coincide");

  TraceOptions opts = opts_in.resolved_for(q);
  ShortTrajectoryReport report;
  for (int round = 0; round < 3; ++round) {
    auto gamma_a = gamma_set(q, a, opts);
    auto gamma_b = gamma_set(q, b, opts);
    double dist = min_distance(gamma_a, gamma_b);
    report.distance = dist;
    report.hit_radius_used = opts.hit_radius;

    const Trajectory* conn = find_connecting_ray(gamma_a, b, 2.0 * opts.hit_radius);
    if (!conn) conn = find_connecting_ray(gamma_b, a, 2.0 * opts.hit_radius);
    if (conn) {
      report.found = true;
      report.resolved = true;
      report.trajectory = *conn;
      report.unbroken = !passes_near_other_critical(q, *conn, a, b, opts.hit_radius);
      report.signature = homotopy_signature(conn->vertices, sorted_poles(q));
      return report;
    }
    if (all_resolved(gamma_a) && all_resolved(gamma_b) && dist > 10.0 * opts.hit_radius) {
      report.found = false;
      report.resolved = true;
      return report;
    }
    // Ambiguous band or unresolved rays: refine and retry.
    opts.hit_radius /= 5.0;
  }
  report.found = false;
  report.resolved = false;
  return report;
}

Complex orthogonal_obstruction(const FactoredRational& q, Complex a, Complex b,
                               const TraceOptions& opts_in) {
  if (!is_zero_of(q, a) || !is_zero_of(q, b))
    throw NotAZero("orthogonal_obstruction: endpoints must be zeros of q");
  const TraceOptions opts = opts_in.resolved_for(q);
  const double neighborhood =
      std::max(100.0 * opts.hit_radius, 0.02 * critical_scale(q));

  auto gamma_a = gamma_set(q, a, opts);

  // Ray of a approaching b most closely, with the closest segment index.
  const Trajectory* best_ray = nullptr;
  std::size_t best_seg = 0;
  double best_t = 0.0;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Trajectory& r : gamma_a) {
    for (std::size_t i = 0; i + 1 < r.vertices.size(); ++i) {
      double t = 0.0;
      double d = detail::point_segment_distance(b, r.vertices[i], r.vertices[i + 1], &t);
      if (d < best_d) {
        best_d = d;
        best_ray = &r;
        best_seg = i;
        best_t = t;
      }
    }
  }
  if (!best_ray || best_d > neighborhood)
    throw NoNearbyRay("orthogonal_obstruction: no ray from a approaches b");

  // Composite path: the ray arc from a to the junction, then back to b.
  std::vector<Complex> composite(best_ray->vertices.begin(),
                                 best_ray->vertices.begin() + best_seg + 1);
  Complex closest = best_ray->vertices[best_seg] +
                    best_t * (best_ray->vertices[best_seg + 1] - best_ray->vertices[best_seg]);

  if (best_d <= 2.0 * opts.hit_radius) {
    // Degenerate composite: the ray essentially ends at b.
    composite.push_back(closest);
    composite.push_back(b);
  } else {
    // Vertical trajectories from b; take the earliest intersection with the ray.
    LocalData ldb = local_data(q, SpherePoint(b));
    auto vdirs = emanation_directions(ldb, FoliationKind::Vertical);
    bool have = false;
    Complex junction;
    std::vector<Complex> sigma_arc;  // from the junction back to b (reversed)
    double best_sigma_len = std::numeric_limits<double>::infinity();
    for (double vd : vdirs) {
      Trajectory sigma = trace(q, b, vd, opts, FoliationKind::Vertical);
      double walked = 0.0;
      for (std::size_t j = 0; j + 1 < sigma.vertices.size(); ++j) {
        Complex s0 = sigma.vertices[j], s1 = sigma.vertices[j + 1];
        walked += std::abs(s1 - s0);
        if (std::abs(s0 - b) > 5.0 * neighborhood) break;
        for (std::size_t i = best_seg > 200 ? best_seg - 200 : 0;
             i + 1 < best_ray->vertices.size() && i <= best_seg + 200; ++i) {
          double t_on_ray = 0.0;
          auto x = detail::segment_intersection(best_ray->vertices[i],
                                                best_ray->vertices[i + 1], s0, s1, &t_on_ray);
          if (!x) continue;
          if (walked < best_sigma_len) {
            best_sigma_len = walked;
            have = true;
            junction = *x;
            sigma_arc.assign(sigma.vertices.begin(), sigma.vertices.begin() + j + 1);
            std::reverse(sigma_arc.begin(), sigma_arc.end());
            composite.assign(best_ray->vertices.begin(), best_ray->vertices.begin() + i + 1);
          }
        }
      }
    }
    if (!have) throw NoNearbyRay("orthogonal_obstruction: no orthogonal arc meets the ray");
    composite.push_back(junction);
    for (Complex v : sigma_arc) composite.push_back(v);
  }

  // Integrate sqrt(-q); the real part is the witness.
  OrientedArc arc{composite, Side::Off};
  FactoredRational f = negated(q);
  // Anchor on the interior of the first segment to stay clear of the zero.
  Complex anchor = composite.size() >= 2 ? 0.5 * (composite[0] + composite[1]) : composite[0];
  return integrate_sqrt(f, arc, principal_branch(f, anchor));
}

}  // namespace qdiff
