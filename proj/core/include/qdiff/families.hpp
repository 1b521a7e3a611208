#pragma once

#include <span>
#include <utility>

#include "qdiff/detector.hpp"
#include "qdiff/tracer.hpp"

namespace qdiff {

struct LaguerreParams {
  Complex C{0.0, 0.0};
};

struct JacobiParams {
  Complex A{0.0, 0.0};
  Complex B{0.0, 0.0};
};

// Zeros a(C) = C + 2 + 2 sqrt(C+1), b(C) = C + 2 - 2 sqrt(C+1) of D_C
// (principal square root). Degeneracies are reported by laguerre_qd, not here.
std::pair<Complex, Complex> laguerre_zeros(Complex C);

// -D_C(z)/z^2 dz^2 in factored form: coefficient -1, simple zeros a(C), b(C),
// double pole at 0. Throws DegenerateParams for C = -1 (zeros coincide) and
// C = 0 (zero collides with the pole).
FactoredRational laguerre_qd(const LaguerreParams& p);

std::pair<Complex, Complex> jacobi_zeros(Complex A, Complex B);

// -D_AB(z)/(z^2-1)^2 dz^2: coefficient -(A+B+2)^2, simple zeros, double poles
// at ±1. Throws ConditionABViolated / ZeroPoleCollision.
FactoredRational jacobi_qd(const JacobiParams& p);

enum class Family { Laguerre, Jacobi };

struct SweepSample {
  double t = 0.0;  // position along the parameter path in [0, 1]
  Complex param_a{0.0, 0.0};  // Laguerre C, or Jacobi A
  Complex param_b{0.0, 0.0};  // Jacobi B (unused for Laguerre)
  ShortTrajectoryReport report;
};

struct SweepResult {
  std::vector<SweepSample> samples;
  bool dichotomy_ok = false;        // found is constant across resolved samples
  bool signature_constant = false;  // signatures agree across found samples
};

// Runs the short-trajectory detector along a straight parameter path with
// `samples` uniform samples; adjacent samples whose result jumps (found flag,
// signature, or trajectory position) are refined by inserted midpoints.
// Throws DegenerateSample when a sample violates the family invariants.
SweepResult sweep_laguerre(Complex c_from, Complex c_to, int samples,
                           const TraceOptions& opts);
SweepResult sweep_jacobi(Complex a_from, Complex a_to, Complex b_fixed, int samples,
                         const TraceOptions& opts);

// Roots of the rescaled polynomials with parameters proportional to the
// degree. Coefficients are built from generalized binomials as falling
// factorial products, roots by Aberth-Ehrlich simultaneous iteration.
std::vector<Complex> laguerre_polynomial_zeros(int n, double C);
std::vector<Complex> jacobi_polynomial_zeros(int n, double A, double B);

struct OverlayReport {
  double fraction = 0.0;
  bool empty_input = false;
  int count_inside = 0;
  int count_total = 0;
};

// Fraction of points within Euclidean distance `tube` of the trajectory
// polyline. Empty input reports fraction 1.0 with the empty flag set.
OverlayReport zero_measure_overlay(std::span<const Complex> zeros,
                                   const Trajectory& trajectory, double tube);

}  // namespace qdiff
