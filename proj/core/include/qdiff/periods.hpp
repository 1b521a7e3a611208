#pragma once

#include <optional>
#include <vector>

#include "qdiff/types.hpp"

namespace qdiff {

// Side of an oriented arc used for boundary values: Plus is the left side
// when traversing the arc along its orientation.
enum class Side { Plus, Minus, Off };

struct OrientedArc {
  std::vector<Complex> vertices;
  Side side = Side::Off;
};

// ∫ sqrt(f) dz over the arc with branch continuity, by per-segment
// Gauss-Legendre panels doubled until successive results agree to 1e-10.
//
// With side Plus/Minus the arc is treated as a cut of sqrt(f): vertices are
// offset by ±eps along the left normal (eps = 1e-7 * scale, Richardson
// extrapolated against eps/2) and the branch transported from start.anchor is
// corrected by the parity of cut crossings, so Plus and Minus integrals are
// exact negatives. start.anchor may be any point joined to the arc by a
// straight segment; it must not cross cuts other than the arc itself.
Complex integrate_sqrt(const FactoredRational& f, const OrientedArc& arc,
                       const BranchState& start);

// Branch-continued ∮ sqrt(f) dz over a closed polyline. Raises BranchNotClosed
// when the continuation does not return to the starting value (odd enclosed
// multiplicity). The overload without a start uses the principal value at the
// first segment midpoint.
Complex contour_integral_sqrt(const FactoredRational& f, const OrientedArc& contour);
Complex contour_integral_sqrt(const FactoredRational& f, const OrientedArc& contour,
                              const BranchState& start);

struct ConditionReport {
  Complex value{0.0, 0.0};
  double real_part = 0.0;
  bool passes = false;
};

// Vanishing-real-part test: passes iff |Re ∫ sqrt(f) dz| <= tol * (1 + |∫|).
ConditionReport condition_check(const FactoredRational& f, const OrientedArc& arc,
                                double tol = 1e-6);

struct QuantizationResult {
  Complex value{0.0, 0.0};
  std::optional<Complex> matched;  // member of admissible within tolerance
  std::vector<Complex> admissible;
  // Endpoint normalization report (second-kind weights only): the values of
  // the transported branch at +1 and -1, and whether one global sign makes
  // them equal 2A and -2B simultaneously.
  std::optional<Complex> endpoint_value_plus;
  std::optional<Complex> endpoint_value_minus;
  std::optional<bool> endpoints_ok;
};

// ∫ (sqrt(D_C))_+ / t dt over an arc joining the two zeros of
// D_C(z) = z^2 - 2(C+2) z + C^2, with the branch fixed by sqrt(D_C) ~ z at
// infinity. Admissible set: ±2πi {1, C+1}.
QuantizationResult laguerre_quantization(Complex C, const OrientedArc& arc,
                                         double tol = 1e-6);

// ∫ (sqrt(D_AB))_+ / (t^2-1) dt over an arc joining the zeros of
// D_AB(z) = (A+B+2)^2 z^2 + 2(A^2-B^2) z + (A-B)^2 - 4(A+B+1), branch fixed
// by sqrt(D_AB) ~ (A+B+2) z at infinity. Admissible set:
// ±2πi {1, A+1, B+1, A+B+1}; also verifies sqrt(D)(1) = 2A, sqrt(D)(-1) = -2B.
QuantizationResult jacobi_quantization(Complex A, Complex B, const OrientedArc& arc,
                                       double tol = 1e-6);

}  // namespace qdiff
