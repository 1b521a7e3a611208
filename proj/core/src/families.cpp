#include "qdiff/families.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "geom.hpp"
#include "qdiff/errors.hpp"

namespace qdiff {

namespace {

constexpr double kPi = std::numbers::pi;

struct PolyEval {
  Complex p{0.0, 0.0};
  Complex dp{0.0, 0.0};
  double scale = 0.0;  // sum of term magnitudes; backward-error yardstick
};

// Aberth-Ehrlich simultaneous iteration from a circular initial layout.
std::vector<Complex> aberth_roots(int degree, const std::function<PolyEval(Complex)>& eval,
                                  Complex center, double radius, int max_iter) {
  std::vector<Complex> z(degree);
  for (int i = 0; i < degree; ++i)
    z[i] = center + std::polar(radius, 2.0 * kPi * i / degree + 0.4);

  for (int iter = 0; iter < max_iter; ++iter) {
    bool done = true;
    double biggest = 0.0;
    for (int i = 0; i < degree; ++i) {
      PolyEval e = eval(z[i]);
      if (std::abs(e.p) <= 1e-12 * (e.scale + 1e-300)) continue;
      done = false;
      Complex ratio = e.p / e.dp;
      Complex sum{0.0, 0.0};
      for (int j = 0; j < degree; ++j)
        if (j != i) sum += Complex(1.0, 0.0) / (z[i] - z[j]);
      Complex w = ratio / (Complex(1.0, 0.0) - ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = ratio;
      z[i] -= w;
      biggest = std::max(biggest, std::abs(w));
    }
    if (done || biggest <= 1e-15 * (1.0 + std::abs(center) + radius)) {
      for (int i = 0; i < degree; ++i) {
        PolyEval e = eval(z[i]);
        if (std::abs(e.p) > 1e-10 * (e.scale + 1e-300))
          throw NonConvergence("polynomial root finding stalled above the residual bound");
      }
      std::sort(z.begin(), z.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
      });
      return z;
    }
  }
  throw NonConvergence("polynomial root finding did not converge in the iteration budget");
}

// Coefficient of z^k in L_n^{nC}(n z): binom(n + nC, n - k) (-n)^k / k!,
// generalized binomials as falling-factorial products so non-integer nC works.
std::vector<double> laguerre_coefficients(int n, double C) {
  std::vector<double> coef(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    double v = 1.0;
    for (int j = 1; j <= k; ++j) v *= -static_cast<double>(n) / j;
    for (int j = 1; j <= n - k; ++j) v *= (n * C + k + j) / j;
    coef[k] = v;
  }
  return coef;
}

// binom(n + nA, n - k) * binom(n + nB, k) for the Jacobi sum.
std::vector<double> jacobi_term_coefficients(int n, double A, double B) {
  std::vector<double> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    double v = 1.0;
    for (int j = 1; j <= n - k; ++j) v *= (n * A + k + j) / j;
    for (int j = 1; j <= k; ++j) v *= (n * B + n - k + j) / j;
    c[k] = v;
  }
  return c;
}

}  // namespace

std::pair<Complex, Complex> laguerre_zeros(Complex C) {
  Complex s = 2.0 * std::sqrt(C + 1.0);
  return {C + 2.0 + s, C + 2.0 - s};
}

FactoredRational laguerre_qd(const LaguerreParams& p) {
  double sc = 1.0 + std::abs(p.C);
  if (std::abs(p.C + 1.0) <= 1e-12 * sc)
    throw DegenerateParams("laguerre_qd: C = -1 makes the zeros coincide");
  if (std::abs(p.C) <= 1e-12 * sc)
    throw DegenerateParams("laguerre_qd: C = 0 drops a zero onto the pole");
  auto [a, b] = laguerre_zeros(p.C);
  return FactoredRational(Complex(-1.0, 0.0), {{a, 1}, {b, 1}, {Complex(0.0, 0.0), -2}});
}

std::pair<Complex, Complex> jacobi_zeros(Complex A, Complex B) {
  Complex lead = A + B + 2.0;
  Complex disc = 4.0 * std::sqrt((A + 1.0) * (B + 1.0) * (A + B + 1.0));
  return {(B * B - A * A + disc) / (lead * lead), (B * B - A * A - disc) / (lead * lead)};
}

FactoredRational jacobi_qd(const JacobiParams& p) {
  Complex A = p.A, B = p.B;
  double sc = 1.0 + std::abs(A) + std::abs(B);
  if (std::abs(A + 1.0) <= 1e-12 * sc || std::abs(B + 1.0) <= 1e-12 * sc ||
      std::abs(A + B + 1.0) <= 1e-12 * sc || std::abs(A + B + 2.0) <= 1e-12 * sc)
    throw ConditionABViolated("jacobi_qd: A+1, B+1, A+B+1, A+B+2 must all be nonzero");
  auto [a, b] = jacobi_zeros(A, B);
  for (Complex z : {a, b})
    if (std::abs(z - 1.0) <= 1e-9 * sc || std::abs(z + 1.0) <= 1e-9 * sc)
      throw ZeroPoleCollision("jacobi_qd: a zero of D_AB falls on a pole (z = ±1)");
  Complex lead = A + B + 2.0;
  return FactoredRational(-lead * lead,
                          {{a, 1}, {b, 1}, {Complex(1.0, 0.0), -2}, {Complex(-1.0, 0.0), -2}});
}

namespace {

double trajectory_gap(const Trajectory& x, const Trajectory& y) {
  // Coarse symmetric vertex-to-polyline gap; only used to trigger refinement.
  double worst = 0.0;
  for (Complex v : x.vertices)
    worst = std::max(worst, detail::point_polyline_distance(v, y.vertices));
  for (Complex v : y.vertices)
    worst = std::max(worst, detail::point_polyline_distance(v, x.vertices));
  return worst;
}

struct SamplePoint {
  double t;
  SweepSample sample;
};

SweepSample eval_sample(Family fam, double t, Complex pa0, Complex pa1, Complex pb,
                        const TraceOptions& opts) {
  SweepSample s;
  s.t = t;
  s.param_a = pa0 + t * (pa1 - pa0);
  s.param_b = pb;
  try {
    if (fam == Family::Laguerre) {
      FactoredRational q = laguerre_qd({s.param_a});
      auto [a, b] = laguerre_zeros(s.param_a);
      s.report = find_short_trajectory(q, a, b, opts);
    } else {
      FactoredRational q = jacobi_qd({s.param_a, s.param_b});
      auto [a, b] = jacobi_zeros(s.param_a, s.param_b);
      s.report = find_short_trajectory(q, a, b, opts);
    }
  } catch (const DegenerateParams& e) {
    throw DegenerateSample(e.what());
  } catch (const ConditionABViolated& e) {
    throw DegenerateSample(e.what());
  } catch (const ZeroPoleCollision& e) {
    throw DegenerateSample(e.what());
  }
  return s;
}

SweepResult run_sweep(Family fam, Complex pa0, Complex pa1, Complex pb, int samples,
                      const TraceOptions& opts) {
  samples = std::max(1, samples);
  std::vector<SamplePoint> pts;
  for (int i = 0; i < samples; ++i) {
    double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
    pts.push_back({t, eval_sample(fam, t, pa0, pa1, pb, opts)});
  }

  // Refine pairs whose result jumps; the detected arc must move continuously.
  double scale = 1.0 + std::abs(pa0) + std::abs(pa1) + std::abs(pb);
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<double> wanted;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const auto& ra = pts[i].sample.report;
      const auto& rb = pts[i + 1].sample.report;
      bool jump = ra.found != rb.found;
      if (!jump && ra.found && rb.found) {
        if (ra.signature != rb.signature) jump = true;
        else if (trajectory_gap(*ra.trajectory, *rb.trajectory) > 0.25 * scale) jump = true;
      }
      if (jump) wanted.push_back(0.5 * (pts[i].t + pts[i + 1].t));
    }
    if (wanted.empty()) break;
    for (double t : wanted) pts.push_back({t, eval_sample(fam, t, pa0, pa1, pb, opts)});
    std::sort(pts.begin(), pts.end(),
              [](const SamplePoint& a, const SamplePoint& b) { return a.t < b.t; });
  }

  SweepResult out;
  bool first = true, base_found = false;
  bool dichotomy = true;
  bool sig_const = true;
  const HomotopySignature* base_sig = nullptr;
  for (auto& sp : pts) {
    const auto& r = sp.sample.report;
    if (r.resolved) {
      if (first) {
        base_found = r.found;
        first = false;
      } else if (r.found != base_found) {
        dichotomy = false;
      }
    }
    if (r.found && r.signature) {
      if (!base_sig) base_sig = &*r.signature;
      else if (!(*base_sig == *r.signature)) sig_const = false;
    }
  }
  for (auto& sp : pts) out.samples.push_back(std::move(sp.sample));
  out.dichotomy_ok = dichotomy;
  out.signature_constant = sig_const;
  return out;
}

}  // namespace

SweepResult sweep_laguerre(Complex c_from, Complex c_to, int samples,
                           const TraceOptions& opts) {
  return run_sweep(Family::Laguerre, c_from, c_to, Complex(0.0, 0.0), samples, opts);
}

SweepResult sweep_jacobi(Complex a_from, Complex a_to, Complex b_fixed, int samples,
                         const TraceOptions& opts) {
  return run_sweep(Family::Jacobi, a_from, a_to, b_fixed, samples, opts);
}

std::vector<Complex> laguerre_polynomial_zeros(int n, double C) {
  if (n < 1) throw std::invalid_argument("laguerre_polynomial_zeros: n must be >= 1");
  if (n > 200) throw DegreeTooLarge("laguerre_polynomial_zeros: n must be <= 200");
  std::vector<double> coef = laguerre_coefficients(n, C);
  if (coef[static_cast<std::size_t>(n)] == 0.0)
    throw NonConvergence("laguerre_polynomial_zeros: vanishing leading coefficient");

  auto eval = [&coef, n](Complex z) {
    PolyEval e;
    Complex p{coef[static_cast<std::size_t>(n)], 0.0}, dp{0.0, 0.0};
    double s = std::abs(coef[static_cast<std::size_t>(n)]);
    double az = std::abs(z);
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + coef[static_cast<std::size_t>(k)];
      s = s * az + std::abs(coef[static_cast<std::size_t>(k)]);
    }
    e.p = p;
    e.dp = dp;
    e.scale = s;
    return e;
  };

  Complex center = Complex(-coef[static_cast<std::size_t>(n) - 1] /
                               (static_cast<double>(n) * coef[static_cast<std::size_t>(n)]),
                           0.0);
  double radius = std::max(
      0.5, std::pow(std::abs(coef[0] / coef[static_cast<std::size_t>(n)]), 1.0 / n));
  return aberth_roots(n, eval, center, radius, 500);
}

std::vector<Complex> jacobi_polynomial_zeros(int n, double A, double B) {
  if (n < 1) throw std::invalid_argument("jacobi_polynomial_zeros: n must be >= 1");
  if (n > 200) throw DegreeTooLarge("jacobi_polynomial_zeros: n must be <= 200");
  std::vector<double> c = jacobi_term_coefficients(n, A, B);

  // p(z) = 2^-n sum_k c_k (z-1)^k (z+1)^{n-k}; evaluated in that form, the
  // monomial expansion is never needed.
  auto eval = [c, n](Complex z) {
    Complex zm = z - 1.0, zp = z + 1.0;
    std::vector<Complex> zmp(static_cast<std::size_t>(n) + 1), zpp(static_cast<std::size_t>(n) + 1);
    zmp[0] = zpp[0] = Complex(1.0, 0.0);
    for (int k = 1; k <= n; ++k) {
      zmp[static_cast<std::size_t>(k)] = zmp[static_cast<std::size_t>(k) - 1] * zm;
      zpp[static_cast<std::size_t>(k)] = zpp[static_cast<std::size_t>(k) - 1] * zp;
    }
    PolyEval e;
    double scale = 0.0;
    for (int k = 0; k <= n; ++k) {
      Complex term = c[static_cast<std::size_t>(k)] * zmp[static_cast<std::size_t>(k)] *
                     zpp[static_cast<std::size_t>(n - k)];
      e.p += term;
      scale += std::abs(term);
      Complex dterm{0.0, 0.0};
      if (k > 0)
        dterm += static_cast<double>(k) * c[static_cast<std::size_t>(k)] *
                 zmp[static_cast<std::size_t>(k - 1)] * zpp[static_cast<std::size_t>(n - k)];
      if (k < n)
        dterm += static_cast<double>(n - k) * c[static_cast<std::size_t>(k)] *
                 zmp[static_cast<std::size_t>(k)] * zpp[static_cast<std::size_t>(n - k - 1)];
      e.dp += dterm;
    }
    double down = std::pow(0.5, n);
    e.p *= down;
    e.dp *= down;
    e.scale = scale * down;
    return e;
  };

  return aberth_roots(n, eval, Complex(0.0, 0.0), 1.2, 500);
}

OverlayReport zero_measure_overlay(std::span<const Complex> zeros,
                                   const Trajectory& trajectory, double tube) {
  if (tube <= 0.0) throw std::invalid_argument("zero_measure_overlay: tube must be positive");
  OverlayReport r;
  r.count_total = static_cast<int>(zeros.size());
  if (zeros.empty()) {
    r.fraction = 1.0;
    r.empty_input = true;
    return r;
  }
  for (Complex z : zeros)
    if (detail::point_polyline_distance(z, trajectory.vertices) <= tube) ++r.count_inside;
  r.fraction = static_cast<double>(r.count_inside) / r.count_total;
  return r;
}

}  // namespace qdiff
