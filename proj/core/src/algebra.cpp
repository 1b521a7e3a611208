#include "qdiff/algebra.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qdiff/errors.hpp"

namespace qdiff {

namespace {

Complex int_pow(Complex base, int e) {
  unsigned k = static_cast<unsigned>(e < 0 ? -e : e);
  Complex acc{1.0, 0.0};
  Complex b = base;
  while (k) {
    if (k & 1u) acc *= b;
    b *= b;
    k >>= 1u;
  }
  return e < 0 ? Complex{1.0, 0.0} / acc : acc;
}

// Square root at z_next nearest to the value carried at z_prev. Nearest-root
// selection is provably correct only while sqrt(q) rotates by less than pi/2
// across the gap; the rotation is bounded by half the total argument sweep of
// the factors, which for a straight gap is the angle subtended at each root.
// Gaps that may rotate further are bisected.
Complex continue_step(const FactoredRational& q, Complex z_prev, Complex w_prev,
                      Complex z_next, int depth) {
  double sweep = 0.0;
  for (const auto& f : q.factors()) {
    Complex a = z_prev - f.root, b = z_next - f.root;
    if (b == Complex(0.0, 0.0) && f.multiplicity > 0)
      return Complex(0.0, 0.0);  // landed exactly on a zero; sign is moot
    if (a == Complex(0.0, 0.0) || b == Complex(0.0, 0.0)) {
      sweep = 4.0 * std::numbers::pi;  // endpoint on a root: force refinement
      break;
    }
    sweep += std::abs(f.multiplicity) * std::abs(std::arg(b / a));
  }
  if (sweep < 0.9 * std::numbers::pi) {
    Complex s = std::sqrt(evaluate(q, z_next));
    if (s == Complex(0.0, 0.0)) return s;  // landed on a zero; sign is moot
    return std::abs(s - w_prev) <= std::abs(-s - w_prev) ? s : -s;
  }
  if (depth >= 20)
    throw BranchAmbiguity("continue_sqrt: branch not separable after maximal refinement");
  Complex zm = 0.5 * (z_prev + z_next);
  Complex wm = continue_step(q, z_prev, w_prev, zm, depth + 1);
  return continue_step(q, zm, wm, z_next, depth + 1);
}

}  // namespace

Complex evaluate(const FactoredRational& q, Complex z) {
  Complex v = q.coefficient();
  for (const auto& f : q.factors()) {
    Complex d = z - f.root;
    if (f.multiplicity < 0 && d == Complex(0.0, 0.0))
      throw PoleEvaluation("evaluate: z is a pole of q");
    v *= int_pow(d, f.multiplicity);
  }
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw PoleEvaluation("evaluate: overflow next to a pole");
  return v;
}

BranchState principal_branch(const FactoredRational& q, Complex anchor) {
  return BranchState{anchor, std::sqrt(evaluate(q, anchor))};
}

Complex transport_sqrt(const FactoredRational& q, Complex from, Complex from_value,
                       Complex to) {
  return continue_step(q, from, from_value, to, 0);
}

std::vector<Complex> continue_sqrt(const FactoredRational& q,
                                   std::span<const Complex> path,
                                   const BranchState& start) {
  std::vector<Complex> values;
  if (path.empty()) return values;
  if (std::abs(start.anchor - path[0]) > 1e-9 * (1.0 + std::abs(path[0])))
    throw std::invalid_argument("continue_sqrt: start.anchor must be the first vertex");
  Complex q0 = evaluate(q, path[0]);
  if (std::abs(start.value * start.value - q0) > 1e-10 * (std::abs(q0) + 1e-300))
    throw std::invalid_argument("continue_sqrt: start.value^2 != q(anchor)");
  values.reserve(path.size());
  values.push_back(start.value);
  for (std::size_t i = 1; i < path.size(); ++i)
    values.push_back(continue_step(q, path[i - 1], values[i - 1], path[i], 0));
  return values;
}

LocalData local_data(const FactoredRational& q, const SpherePoint& p) {
  LocalData out{p, 0, Complex{0.0, 0.0}, std::nullopt};
  if (p.is_infinity()) {
    out.order = -(q.degree_at_infinity() + 4);
    out.leading = q.coefficient();
  } else {
    Complex z = p.value();
    const Factor* match = nullptr;
    for (const auto& f : q.factors()) {
      if (std::abs(z - f.root) <= 1e-12 * (1.0 + std::abs(f.root))) {
        match = &f;
        break;
      }
    }
    if (match) {
      out.order = match->multiplicity;
      Complex lead = q.coefficient();
      for (const auto& f : q.factors()) {
        if (&f == match) continue;
        lead *= int_pow(z - f.root, f.multiplicity);
      }
      out.leading = lead;
    } else {
      out.leading = evaluate(q, z);
    }
  }
  if (out.order == -2) out.residue_sq = out.leading;
  return out;
}

DoublePoleForm classify_double_pole(const LocalData& d) {
  if (d.order != -2 || !d.residue_sq)
    throw NotDoublePole("classify_double_pole: order must be -2");
  Complex r = std::sqrt(*d.residue_sq);
  double m = std::abs(r);
  if (std::abs(r.imag()) < 1e-9 * m) return DoublePoleForm::Radial;
  if (std::abs(r.real()) < 1e-9 * m) return DoublePoleForm::Circular;
  return DoublePoleForm::LogSpiral;
}

Complex residue_at_infinity_sqrt(const FactoredRational& P) {
  int n = 0;
  double rmax = 0.0;
  for (const auto& f : P.factors()) {
    if (f.multiplicity < 0)
      throw std::invalid_argument("residue_at_infinity_sqrt: input must be a polynomial");
    n += f.multiplicity;
    rmax = std::max(rmax, std::abs(f.root));
  }
  if (n % 2 != 0)
    throw OddDegree("residue_at_infinity_sqrt: polynomial degree must be even");

  const double R = 2.0 * rmax + 1.0;
  // Branch target at angle 0: sqrt(P) ~ sqrt(leading) z^{n/2}.
  Complex target = std::sqrt(P.coefficient()) * std::pow(R, 0.5 * n);

  auto run = [&](int N) {
    std::vector<Complex> nodes(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) {
      double th = 2.0 * std::numbers::pi * k / N;
      nodes[k] = R * Complex(std::cos(th), std::sin(th));
    }
    nodes[N] = nodes[0];
    Complex w0 = std::sqrt(evaluate(P, nodes[0]));
    if (std::abs(w0 - target) > std::abs(-w0 - target)) w0 = -w0;
    std::vector<Complex> vals = continue_sqrt(P, nodes, BranchState{nodes[0], w0});
    // Uniform rule on the circle: res_inf = -(1/N) sum sqrt(P)(z_k) z_k,
    // which is (1/2πi) of the clockwise contour integral.
    Complex s{0.0, 0.0};
    for (int k = 0; k < N; ++k) s += vals[k] * nodes[k];
    return -s / static_cast<double>(N);
  };

  Complex prev = run(64);
  for (int N = 128; N <= (1 << 20); N *= 2) {
    Complex cur = run(N);
    if (std::abs(cur - prev) <= 1e-10 * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace qdiff
