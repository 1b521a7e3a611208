#include "qdiff/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "geom.hpp"
#include "qdiff/errors.hpp"

namespace qdiff {

namespace {

constexpr double kPi = std::numbers::pi;

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0, 500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0};
constexpr double kB4[7] = {5179.0 / 57600,     0,           7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

// phi-distance from radius S to radius R when |q| ~ |c| rho^n.
double phi_to_escape(double abs_c, int n, double S, double R) {
  double sc = std::sqrt(abs_c);
  if (n == -2) return sc * std::log(R / std::max(S, 1e-6));
  double e = 0.5 * (n + 2);
  return std::abs(sc * (std::pow(R, e) - std::pow(S, e)) / e);
}

}  // namespace

TraceOptions TraceOptions::resolved_for(const FactoredRational& q) const {
  TraceOptions r = *this;
  double S = critical_scale(q);
  if (r.hit_radius <= 0.0) r.hit_radius = 1e-4 * S;
  if (r.escape_radius <= 0.0) r.escape_radius = 10.0 * S + 10.0;
  if (r.max_phi_length <= 0.0) {
    // Large enough that escaping rays actually reach the escape circle.
    double esc = phi_to_escape(std::abs(q.coefficient()), q.degree_at_infinity(), S,
                               r.escape_radius);
    r.max_phi_length = 100.0 * S + 4.0 * esc;
  }
  if (r.hit_radius >= r.escape_radius)
    throw std::invalid_argument("TraceOptions: hit_radius must be < escape_radius");
  return r;
}

std::vector<double> emanation_directions(const LocalData& d, FoliationKind kind) {
  if (d.point.is_infinity() || d.order <= -2)
    throw InfiniteCriticalPoint("emanation_directions: infinite critical point");
  int r = d.order;
  int count = r + 2;
  double arg_a = std::arg(d.leading);
  double shift = kind == FoliationKind::Horizontal ? 0.0 : kPi / count;
  std::vector<double> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k)
    out.push_back(detail::wrap_angle((2.0 * kPi * k - arg_a) / count + shift));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> asymptotic_directions(const FactoredRational& q, FoliationKind kind) {
  int n = q.degree_at_infinity();
  if (n + 4 < 3)
    throw NotHigherOrderPole("asymptotic_directions: infinity is not a pole of order >= 3");
  int count = n + 2;
  double arg_c = std::arg(q.coefficient());
  double shift = kind == FoliationKind::Horizontal ? 0.0 : kPi / count;
  std::vector<double> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k)
    out.push_back(detail::wrap_angle((2.0 * kPi * k - arg_c) / count + shift));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> asymptotic_directions(const FactoredRational& q) {
  return asymptotic_directions(q, FoliationKind::Horizontal);
}

Trajectory trace(const FactoredRational& q, Complex start, double direction,
                 const TraceOptions& opts_in, FoliationKind kind) {
  const TraceOptions opts = opts_in.resolved_for(q);

  struct CritPt {
    Complex z;
    int order;
  };
  std::vector<CritPt> crit;
  crit.reserve(q.factors().size());
  for (const auto& f : q.factors()) crit.push_back({f.root, f.multiplicity});

  LocalData ld = local_data(q, SpherePoint(start));
  if (classify_order(ld.order) == PointClass::InfiniteCritical)
    throw StartsAtInfiniteCriticalPoint("trace: start is a pole of order >= 2");

  Trajectory out;
  out.kind = kind;
  const Complex iota = kind == FoliationKind::Horizontal ? Complex(1, 0) : Complex(0, 1);
  const double theta = detail::wrap_angle(direction);

  const bool critical_start = ld.order != 0;
  Complex z = start;
  if (critical_start) {
    auto dirs = emanation_directions(ld, kind);
    double best = std::numeric_limits<double>::infinity();
    for (double d : dirs) best = std::min(best, detail::angle_difference(theta, d));
    if (best > 1e-6)
      throw std::invalid_argument("trace: direction is not an emanation direction");
    if (ld.order > 0) {
      out.vertices.push_back(start);
      out.sqrt_values.push_back(Complex(0, 0));
    }
    z = start + opts.hit_radius * std::polar(1.0, theta);
  }

  Complex w = std::sqrt(evaluate(q, z));
  double sigma = 1.0;
  {
    Complex v = iota / w;
    Complex e = std::polar(1.0, theta);
    if (detail::dot(v, e) < detail::dot(-v, e)) sigma = -1.0;
  }
  const double launch_dir = std::arg(sigma * iota / w);

  out.vertices.push_back(z);
  out.sqrt_values.push_back(w);

  auto nearest_crit = [&](Complex p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : crit) best = std::min(best, std::abs(p - c.z));
    return best;
  };

  // Branch value at p nearest to ref; nullopt when the selection is unsafe
  // (the step gets rejected and halved instead).
  auto stage_sqrt = [&](Complex p, Complex ref) -> std::optional<Complex> {
    Complex s;
    try {
      s = std::sqrt(evaluate(q, p));
    } catch (const PoleEvaluation&) {
      return std::nullopt;
    }
    if (s == Complex(0, 0)) return std::nullopt;
    double dp = std::abs(s - ref), dm = std::abs(-s - ref);
    if (std::min(dp, dm) > 0.8 * std::max(dp, dm)) return std::nullopt;
    double ratio = std::abs(s) / std::abs(ref);
    if (ratio < 0.4 || ratio > 2.5) return std::nullopt;
    return dp <= dm ? s : -s;
  };

  auto finish = [&](Termination term) {
    out.termination = term;
    out.phi_length = phi_length(q, out.vertices);
    return out;
  };

  double phi = 0.0;
  bool source_armed = !critical_start;
  bool loop_armed = false;
  double d0 = nearest_crit(z);
  double h = 0.25 * std::min(opts.max_step_scale * (1.0 + std::abs(z)),
                             0.5 * (std::isfinite(d0) ? d0 : 1.0)) *
             std::abs(w);
  if (h <= 0.0 || !std::isfinite(h)) h = 1e-3;

  for (int step = 0; step < opts.max_steps; ++step) {
    if (opts.max_phi_length - phi < 1e-12)
      return finish({TerminationKind::Budget, Complex(0, 0), -1});

    double d_crit = nearest_crit(z);
    double cap_e = opts.max_step_scale * (1.0 + std::abs(z));
    if (std::isfinite(d_crit)) cap_e = std::min(cap_e, 0.5 * d_crit);
    // Keep steps short near the launch point once a loop return is possible,
    // so a closing pass cannot jump the detection ball on a chord.
    if (!critical_start && loop_armed)
      cap_e = std::min(cap_e, std::max(0.5 * std::abs(z - start), 0.25 * opts.hit_radius));
    h = std::min(h, cap_e * std::abs(w));
    h = std::min(h, opts.max_phi_length - phi);

    // One Dormand-Prince attempt.
    Complex k[7];
    bool fail = false;
    k[0] = sigma * iota / w;
    for (int i = 1; i < 7; ++i) {
      Complex zi = z;
      for (int j = 0; j < i; ++j) zi += h * kA[i][j] * k[j];
      auto wi = stage_sqrt(zi, w);
      if (!wi) {
        fail = true;
        break;
      }
      k[i] = sigma * iota / *wi;
    }
    double err = 0.0, tol = 0.0;
    Complex z_new;
    if (!fail) {
      Complex acc5(0, 0), acc4(0, 0);
      for (int i = 0; i < 7; ++i) {
        acc5 += kB5[i] * k[i];
        acc4 += kB4[i] * k[i];
      }
      z_new = z + h * acc5;
      err = std::abs(h * (acc5 - acc4));
      tol = opts.rel_tol * (1.0 + std::abs(z_new));
      fail = !(err <= tol);
    }
    if (fail) {
      double shrink = err > 0.0 && tol > 0.0
                          ? std::clamp(0.9 * std::pow(tol / err, 0.2), 0.1, 0.9)
                          : 0.5;
      h *= shrink;
      if (h < 1e-15 * (1.0 + std::abs(w)) || !std::isfinite(h))
        return finish({TerminationKind::Budget, Complex(0, 0), -1});
      continue;
    }
    auto wn = stage_sqrt(z_new, w);
    if (!wn) {
      h *= 0.5;
      continue;
    }
    Complex w_new = *wn;
    phi += h;

    // Hit detection against the segment just traversed.
    for (const auto& c : crit) {
      bool is_source = critical_start && std::abs(c.z - start) < 1e-14 * (1.0 + std::abs(start));
      if (is_source && !source_armed) continue;
      double t = 0.0;
      double dseg = detail::point_segment_distance(c.z, z, z_new, &t);
      if (dseg < opts.hit_radius) {
        Complex z_end = z + t * (z_new - z);
        phi -= h * (1.0 - t);
        if (std::abs(z_end - out.vertices.back()) > 0.0) {
          auto we = stage_sqrt(z_end, w);
          out.vertices.push_back(z_end);
          out.sqrt_values.push_back(we ? *we : w);
        }
        if (c.order > 0) {
          out.vertices.push_back(c.z);
          out.sqrt_values.push_back(Complex(0, 0));
        }
        return finish({TerminationKind::HitCriticalPoint, c.z, -1});
      }
    }
    if (!source_armed && std::abs(z_new - start) > 3.0 * opts.hit_radius)
      source_armed = true;

    // Closed-loop detection, regular launches only (a critical launch that
    // comes back registers as a hit on its own source).
    if (!critical_start) {
      if (!loop_armed) {
        if (phi > 10.0 * opts.hit_radius && std::abs(z_new - start) > 3.0 * opts.hit_radius)
          loop_armed = true;
      } else {
        double t = 0.0;
        double dseg = detail::point_segment_distance(start, z, z_new, &t);
        if (dseg < opts.hit_radius) {
          double cur_dir = std::arg(sigma * iota / w_new);
          if (detail::angle_difference(cur_dir, launch_dir) < 1e-3) {
            Complex z_end = z + t * (z_new - z);
            phi -= h * (1.0 - t);
            out.vertices.push_back(z_end);
            out.sqrt_values.push_back(w_new);
            return finish({TerminationKind::ClosedLoop, Complex(0, 0), -1});
          }
        }
      }
    }

    if (std::abs(z_new) > opts.escape_radius) {
      out.vertices.push_back(z_new);
      out.sqrt_values.push_back(w_new);
      int index = -1;
      if (q.degree_at_infinity() + 4 >= 3) {
        auto dirs = asymptotic_directions(q, kind);
        double best = std::numeric_limits<double>::infinity();
        double az = std::arg(z_new);
        for (std::size_t i = 0; i < dirs.size(); ++i) {
          double d = detail::angle_difference(az, dirs[i]);
          if (d < best) {
            best = d;
            index = static_cast<int>(i);
          }
        }
      }
      return finish({TerminationKind::EscapedToInfinity, Complex(0, 0), index});
    }

    out.vertices.push_back(z_new);
    out.sqrt_values.push_back(w_new);
    z = z_new;
    w = w_new;
    h *= std::clamp(0.9 * std::pow(tol / std::max(err, 1e-300), 0.2), 1.0, 5.0);
  }
  return finish({TerminationKind::Budget, Complex(0, 0), -1});
}

namespace {

struct PhiIntegrand {
  const FactoredRational& q;
  Complex a, d;
  double len;
  double operator()(double t) const {
    double v = std::sqrt(std::abs(evaluate(q, a + t * d))) * len;
    if (!std::isfinite(v)) throw PoleOnPath("phi_length: pole on path");
    return v;
  }
};

double simpson_rec(const PhiIntegrand& f, double a, double fa, double b, double fb,
                   double fm, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double s2 = left + right;
  if (depth >= 30) return s2;
  if (std::abs(s2 - whole) <= 15.0 * tol) return s2 + (s2 - whole) / 15.0;
  return simpson_rec(f, a, fa, m, fm, flm, left, 0.5 * tol, depth + 1) +
         simpson_rec(f, m, fm, b, fb, frm, right, 0.5 * tol, depth + 1);
}

}  // namespace

double phi_length(const FactoredRational& q, std::span<const Complex> polyline) {
  if (polyline.size() < 2) return 0.0;
  for (Complex v : polyline)
    for (const auto& f : q.factors())
      if (f.multiplicity < 0 && std::abs(v - f.root) <= 1e-13 * (1.0 + std::abs(f.root)))
        throw PoleOnPath("phi_length: polyline vertex at a pole");

  double total = 0.0;
  try {
    // Rough pass to distribute the relative tolerance.
    std::vector<double> rough(polyline.size() - 1, 0.0);
    double rough_total = 0.0;
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
      Complex a = polyline[i], d = polyline[i + 1] - polyline[i];
      double len = std::abs(d);
      if (len == 0.0) continue;
      PhiIntegrand f{q, a, d, len};
      rough[i] = (f(0.0) + 4.0 * f(0.5) + f(1.0)) / 6.0;
      rough_total += rough[i];
    }
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
      Complex a = polyline[i], d = polyline[i + 1] - polyline[i];
      double len = std::abs(d);
      if (len == 0.0) continue;
      PhiIntegrand f{q, a, d, len};
      double fa = f(0.0), fb = f(1.0), fm = f(0.5);
      double whole = (fa + 4.0 * fm + fb) / 6.0;
      double tol = 1e-8 * (rough[i] + 1e-6 * rough_total + 1e-300);
      total += simpson_rec(f, 0.0, fa, 1.0, fb, fm, whole, tol, 0);
    }
  } catch (const PoleEvaluation&) {
    throw PoleOnPath("phi_length: pole on path");
  }
  return total;
}

int CriticalGraph::point_index(Complex p, double tol) const {
  int best = -1;
  double best_d = tol;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double d = std::abs(points[i].location.value() - p);
    if (d <= best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

bool CriticalGraph::connected(Complex a, Complex b, double tol) const {
  int i = point_index(a, tol), j = point_index(b, tol);
  if (i < 0 || j < 0) return false;
  auto key = std::minmax(i, j);
  auto it = adjacency.find({key.first, key.second});
  return it != adjacency.end() && !it->second.empty();
}

CriticalGraph critical_graph(const FactoredRational& q, const TraceOptions& opts_in) {
  const TraceOptions opts = opts_in.resolved_for(q);
  CriticalGraph g;
  for (const auto& cp : critical_points(q))
    if (!cp.location.is_infinity()) g.points.push_back(cp);
  for (std::size_t i = 0; i < g.points.size(); ++i)
    if (g.points[i].cls == PointClass::FiniteCritical) g.sources.push_back(static_cast<int>(i));
  if (g.sources.empty())
    throw std::invalid_argument("critical_graph: q has no finite critical point");

  for (int si : g.sources) {
    Complex p = g.points[si].location.value();
    LocalData ld = local_data(q, SpherePoint(p));
    auto dirs = emanation_directions(ld, FoliationKind::Horizontal);
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      GraphRay ray{si, static_cast<int>(k),
                   trace(q, p, dirs[k], opts, FoliationKind::Horizontal)};
      g.rays.push_back(std::move(ray));
    }
  }
  for (std::size_t idx = 0; idx < g.rays.size(); ++idx) {
    const GraphRay& ray = g.rays[idx];
    if (ray.trajectory.termination.kind != TerminationKind::HitCriticalPoint) continue;
    int j = g.point_index(ray.trajectory.termination.point, 2.0 * opts.hit_radius);
    if (j < 0) continue;
    auto key = std::minmax(ray.source, j);
    g.adjacency[{key.first, key.second}].push_back(static_cast<int>(idx));
  }
  return g;
}

}  // namespace qdiff
