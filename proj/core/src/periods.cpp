#include "qdiff/periods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "geom.hpp"
#include "qdiff/algebra.hpp"
#include "qdiff/errors.hpp"

namespace qdiff {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kTwoPiI{0.0, 2.0 * kPi};

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double kGlW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

struct UnitWeight {
  Complex operator()(Complex) const { return Complex(1.0, 0.0); }
};
struct InverseT {
  Complex operator()(Complex z) const { return Complex(1.0, 0.0) / z; }
};
struct InverseTSquaredMinusOne {
  Complex operator()(Complex z) const { return Complex(1.0, 0.0) / (z * z - Complex(1.0, 0.0)); }
};

// Quadrature nodes for one polyline: per segment, `panels` Gauss-Legendre
// panels in the cosine-graded variable t = (1 - cos(pi u)) / 2, which removes
// the square-root endpoint singularity of the integrand at cut ends.
struct Chain {
  std::vector<Complex> nodes;
  std::vector<Complex> jac;  // dz factor per node, quadrature weight included
};

Chain build_chain(const std::vector<Complex>& verts, int panels) {
  Chain c;
  for (std::size_t s = 0; s + 1 < verts.size(); ++s) {
    Complex a = verts[s], d = verts[s + 1] - verts[s];
    if (std::abs(d) == 0.0) continue;
    for (int p = 0; p < panels; ++p) {
      double u0 = static_cast<double>(p) / panels;
      double u1 = static_cast<double>(p + 1) / panels;
      double um = 0.5 * (u0 + u1), uh = 0.5 * (u1 - u0);
      for (int j = 0; j < 8; ++j) {
        double u = um + uh * kGlX[j];
        double t = 0.5 * (1.0 - std::cos(kPi * u));
        double dt_du = 0.5 * kPi * std::sin(kPi * u);
        c.nodes.push_back(a + t * d);
        c.jac.push_back(kGlW[j] * uh * dt_du * d);
      }
    }
  }
  return c;
}

double polyline_scale(const std::vector<Complex>& verts) {
  double s = 1.0;
  for (Complex v : verts) s = std::max(s, std::abs(v));
  return s;
}

void check_arc(const OrientedArc& arc) {
  if (arc.vertices.size() < 2)
    throw std::invalid_argument("OrientedArc: need at least two vertices");
}

// Crossing parity of the segment [anchor -> target] against the cut
// polyline, with deterministic nudges of the anchor on degeneracy.
int crossing_parity(const std::vector<Complex>& cut, Complex& anchor, Complex& anchor_value,
                    Complex target, const FactoredRational& f) {
  for (int tries = 0; tries < 12; ++tries) {
    auto n = detail::count_crossings(anchor, target, cut);
    if (n) return *n & 1;
    Complex moved = anchor + std::polar(3e-7 * polyline_scale(cut) * (tries + 1),
                                        0.7548776662466927 * (tries + 1));
    anchor_value = transport_sqrt(f, anchor, anchor_value, moved);
    anchor = moved;
  }
  throw BranchAmbiguity("integrate_sqrt: could not resolve cut crossings from the anchor");
}

// For open arcs the branch is brought in at a node in the middle of the
// chain (well away from any square-root endpoint of a cut) and continued
// outward from there; node spacing shrinks toward each end, so the endpoint
// approach never asks the continuation to bridge a large magnitude jump in
// one gap. Closed contours enter at the first node instead, keeping the
// anchor hop under the caller's control.
template <class Weight>
Complex run_chain(const FactoredRational& f, const std::vector<Complex>& verts, int panels,
                  Complex anchor, Complex anchor_value, const std::vector<Complex>* cut,
                  const Weight& weight, bool closed, bool* closure_ok) {
  Chain c = build_chain(verts, panels);
  if (c.nodes.empty()) return Complex(0.0, 0.0);
  const std::size_t n = c.nodes.size();
  const std::size_t entry = closed ? 0 : n / 2;

  Complex a = anchor, av = anchor_value;
  bool flip = false;
  if (cut) flip = crossing_parity(*cut, a, av, c.nodes[entry], f) != 0;
  Complex w_entry = transport_sqrt(f, a, av, c.nodes[entry]);
  if (flip) w_entry = -w_entry;

  Complex total = w_entry * weight(c.nodes[entry]) * c.jac[entry];
  if (closed) {
    Complex w = w_entry;
    for (std::size_t s = 1; s < n; ++s) {
      std::size_t k = (entry + s) % n;
      std::size_t p = (entry + s - 1) % n;
      w = transport_sqrt(f, c.nodes[p], w, c.nodes[k]);
      total += w * weight(c.nodes[k]) * c.jac[k];
    }
    if (closure_ok) {
      Complex back = transport_sqrt(f, c.nodes[(entry + n - 1) % n], w, c.nodes[entry]);
      *closure_ok = std::abs(back - w_entry) <= 1e-6 * (std::abs(w_entry) + 1e-300);
    }
    return total;
  }
  Complex w = w_entry;
  for (std::size_t k = entry + 1; k < n; ++k) {
    w = transport_sqrt(f, c.nodes[k - 1], w, c.nodes[k]);
    total += w * weight(c.nodes[k]) * c.jac[k];
  }
  w = w_entry;
  for (std::size_t k = entry; k-- > 0;) {
    w = transport_sqrt(f, c.nodes[k + 1], w, c.nodes[k]);
    total += w * weight(c.nodes[k]) * c.jac[k];
  }
  return total;
}

template <class Weight>
Complex converge_chain(const FactoredRational& f, const std::vector<Complex>& verts,
                       Complex anchor, Complex anchor_value, const std::vector<Complex>* cut,
                       const Weight& weight, bool closed = false,
                       bool* closure_ok = nullptr) {
  Complex prev =
      run_chain(f, verts, 1, anchor, anchor_value, cut, weight, closed, closure_ok);
  for (int panels = 2; panels <= 512; panels *= 2) {
    Complex cur =
        run_chain(f, verts, panels, anchor, anchor_value, cut, weight, closed, closure_ok);
    if (std::abs(cur - prev) <= 1e-10 * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

template <class Weight>
Complex boundary_weighted_integral(const FactoredRational& f, const OrientedArc& arc,
                                   Complex anchor, Complex anchor_value,
                                   const Weight& weight) {
  double scale = polyline_scale(arc.vertices);
  // Anchors sitting on the cut are moved to the Plus side first.
  if (detail::point_polyline_distance(anchor, arc.vertices) < 1e-9 * scale) {
    double best = std::numeric_limits<double>::infinity();
    Complex normal(0.0, 1.0);
    for (std::size_t i = 0; i + 1 < arc.vertices.size(); ++i) {
      double d = detail::point_segment_distance(anchor, arc.vertices[i], arc.vertices[i + 1]);
      if (d < best) {
        Complex seg = arc.vertices[i + 1] - arc.vertices[i];
        if (std::abs(seg) > 0.0) {
          best = d;
          normal = Complex(0.0, 1.0) * seg / std::abs(seg);
        }
      }
    }
    Complex moved = anchor + 1e-6 * scale * normal;
    anchor_value = transport_sqrt(f, anchor, anchor_value, moved);
    anchor = moved;
  }

  double sgn = arc.side == Side::Minus ? -1.0 : 1.0;
  auto at_eps = [&](double eps) {
    std::vector<Complex> off = detail::offset_polyline(arc.vertices, sgn * eps);
    return converge_chain(f, off, anchor, anchor_value, &arc.vertices, weight);
  };
  double eps = 1e-7 * scale;
  Complex coarse = at_eps(eps);
  Complex fine = at_eps(0.5 * eps);
  return 2.0 * fine - coarse;  // Richardson in the offset
}

std::pair<Complex, Complex> quadratic_zeros(Complex half_sum, Complex sqrt_disc) {
  return {half_sum + sqrt_disc, half_sum - sqrt_disc};
}

void check_weight_poles(const OrientedArc& arc, std::initializer_list<Complex> wpoles) {
  double scale = polyline_scale(arc.vertices);
  for (Complex p : wpoles)
    if (detail::point_polyline_distance(p, arc.vertices) < 1e-9 * scale)
      throw PoleOnPath("quantization: arc passes through a pole of the weight");
}

std::optional<Complex> match_admissible(Complex value, const std::vector<Complex>& admissible,
                                        double tol_abs) {
  std::optional<Complex> best;
  double best_d = tol_abs;
  for (Complex m : admissible) {
    double d = std::abs(value - m);
    if (d <= best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

}  // namespace

Complex integrate_sqrt(const FactoredRational& f, const OrientedArc& arc,
                       const BranchState& start) {
  check_arc(arc);
  if (arc.side == Side::Off)
    return converge_chain(f, arc.vertices, start.anchor, start.value, nullptr, UnitWeight{});
  return boundary_weighted_integral(f, arc, start.anchor, start.value, UnitWeight{});
}

Complex contour_integral_sqrt(const FactoredRational& f, const OrientedArc& contour,
                              const BranchState& start) {
  check_arc(contour);
  std::vector<Complex> verts = contour.vertices;
  if (std::abs(verts.front() - verts.back()) > 0.0) verts.push_back(verts.front());
  bool ok = true;
  Complex total =
      converge_chain(f, verts, start.anchor, start.value, nullptr, UnitWeight{}, true, &ok);
  if (!ok)
    throw BranchNotClosed("contour_integral_sqrt: odd enclosed multiplicity");
  return total;
}

Complex contour_integral_sqrt(const FactoredRational& f, const OrientedArc& contour) {
  check_arc(contour);
  Complex anchor = 0.5 * (contour.vertices[0] + contour.vertices[1]);
  return contour_integral_sqrt(f, contour, principal_branch(f, anchor));
}

ConditionReport condition_check(const FactoredRational& f, const OrientedArc& arc,
                                double tol) {
  check_arc(arc);
  std::size_t mid_seg = (arc.vertices.size() - 1) / 2;
  Complex anchor = 0.5 * (arc.vertices[mid_seg] + arc.vertices[mid_seg + 1]);
  Complex value = integrate_sqrt(f, arc, principal_branch(f, anchor));
  ConditionReport r;
  r.value = value;
  r.real_part = value.real();
  r.passes = std::abs(value.real()) <= tol * (1.0 + std::abs(value));
  return r;
}

QuantizationResult laguerre_quantization(Complex C, const OrientedArc& arc, double tol) {
  check_arc(arc);
  double pscale = 1.0 + std::abs(C);
  if (std::abs(C + 1.0) <= 1e-12 * pscale)
    throw DegenerateC("laguerre_quantization: C = -1 (zeros coincide)");
  if (std::abs(C) <= 1e-12 * pscale)
    throw DegenerateC("laguerre_quantization: C = 0 (zero meets the pole)");

  Complex s = 2.0 * std::sqrt(C + 1.0);
  auto [a, b] = quadratic_zeros(C + 2.0, s);
  FactoredRational f(Complex(1.0, 0.0), {{a, 1}, {b, 1}});

  double scale = polyline_scale(arc.vertices) + std::max(std::abs(a), std::abs(b));
  Complex front = arc.vertices.front(), back = arc.vertices.back();
  bool joins = (std::abs(front - b) <= 1e-6 * scale && std::abs(back - a) <= 1e-6 * scale) ||
               (std::abs(front - a) <= 1e-6 * scale && std::abs(back - b) <= 1e-6 * scale);
  if (!joins)
    throw std::invalid_argument("laguerre_quantization: arc must join the zeros of D_C");
  check_weight_poles(arc, {Complex(0.0, 0.0)});

  // Branch anchored far away, on the sheet with sqrt(D_C) ~ z.
  double R = 10.0 * (1.0 + scale);
  Complex anchor = std::polar(R, 0.123);
  Complex pv = std::sqrt(evaluate(f, anchor));
  Complex anchor_value = std::abs(pv - anchor) <= std::abs(-pv - anchor) ? pv : -pv;

  QuantizationResult out;
  out.value = boundary_weighted_integral(f, arc, anchor, anchor_value, InverseT{});
  out.admissible = {kTwoPiI, -kTwoPiI, kTwoPiI * (C + 1.0), -kTwoPiI * (C + 1.0)};
  double tol_abs = tol * (1.0 + 2.0 * kPi * (1.0 + std::abs(C + 1.0)));
  out.matched = match_admissible(out.value, out.admissible, tol_abs);
  return out;
}

QuantizationResult jacobi_quantization(Complex A, Complex B, const OrientedArc& arc,
                                       double tol) {
  check_arc(arc);
  double pscale = 1.0 + std::abs(A) + std::abs(B);
  if (std::abs(A + 1.0) <= 1e-12 * pscale || std::abs(B + 1.0) <= 1e-12 * pscale ||
      std::abs(A + B + 1.0) <= 1e-12 * pscale || std::abs(A + B + 2.0) <= 1e-12 * pscale)
    throw ConditionABViolated("jacobi_quantization: A+1, B+1, A+B+1, A+B+2 must be nonzero");

  Complex lead = A + B + 2.0;
  Complex disc = 4.0 * std::sqrt((A + 1.0) * (B + 1.0) * (A + B + 1.0));
  Complex a = (B * B - A * A + disc) / (lead * lead);
  Complex b = (B * B - A * A - disc) / (lead * lead);
  FactoredRational f(lead * lead, {{a, 1}, {b, 1}});

  double scale = polyline_scale(arc.vertices) + std::max(std::abs(a), std::abs(b)) + 1.0;
  Complex front = arc.vertices.front(), back = arc.vertices.back();
  bool joins = (std::abs(front - b) <= 1e-6 * scale && std::abs(back - a) <= 1e-6 * scale) ||
               (std::abs(front - a) <= 1e-6 * scale && std::abs(back - b) <= 1e-6 * scale);
  if (!joins)
    throw std::invalid_argument("jacobi_quantization: arc must join the zeros of D_AB");
  check_weight_poles(arc, {Complex(1.0, 0.0), Complex(-1.0, 0.0)});

  double R = 10.0 * (1.0 + scale);
  Complex anchor = std::polar(R, 0.123);
  Complex pv = std::sqrt(evaluate(f, anchor));
  Complex target = lead * anchor;
  Complex anchor_value = std::abs(pv - target) <= std::abs(-pv - target) ? pv : -pv;

  QuantizationResult out;
  out.value = boundary_weighted_integral(f, arc, anchor, anchor_value, InverseTSquaredMinusOne{});
  out.admissible = {kTwoPiI,
                    -kTwoPiI,
                    kTwoPiI * (A + 1.0),
                    -kTwoPiI * (A + 1.0),
                    kTwoPiI * (B + 1.0),
                    -kTwoPiI * (B + 1.0),
                    kTwoPiI * (A + B + 1.0),
                    -kTwoPiI * (A + B + 1.0)};
  double max_mag = 1.0;
  for (Complex m : out.admissible) max_mag = std::max(max_mag, std::abs(m));
  out.matched = match_admissible(out.value, out.admissible, tol * (1.0 + max_mag));

  // Endpoint normalization of the transported branch: sqrt(D)(1) = 2A and
  // sqrt(D)(-1) = -2B must hold for a single global sign.
  {
    Complex anc = anchor, anc_val = anchor_value;
    int par_p = crossing_parity(arc.vertices, anc, anc_val, Complex(1.0, 0.0), f);
    Complex vp = transport_sqrt(f, anc, anc_val, Complex(1.0, 0.0));
    if (par_p) vp = -vp;
    int par_m = crossing_parity(arc.vertices, anc, anc_val, Complex(-1.0, 0.0), f);
    Complex vm = transport_sqrt(f, anc, anc_val, Complex(-1.0, 0.0));
    if (par_m) vm = -vm;
    out.endpoint_value_plus = vp;
    out.endpoint_value_minus = vm;
    auto ok_with = [&](double s) {
      return std::abs(s * vp - 2.0 * A) <= 1e-6 * (1.0 + std::abs(2.0 * A)) &&
             std::abs(s * vm + 2.0 * B) <= 1e-6 * (1.0 + std::abs(2.0 * B));
    };
    out.endpoints_ok = ok_with(1.0) || ok_with(-1.0);
  }
  return out;
}

}  // namespace qdiff
