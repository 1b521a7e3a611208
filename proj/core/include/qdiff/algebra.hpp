#pragma once

#include <span>

#include "qdiff/types.hpp"

namespace qdiff {

enum class DoublePoleForm { Radial, Circular, LogSpiral };

// q(z) by factored product. Throws PoleEvaluation when z is a pole.
Complex evaluate(const FactoredRational& q, Complex z);

// Branch state holding the principal square root of q at the anchor.
BranchState principal_branch(const FactoredRational& q, Complex anchor);

// sqrt(q) along a path of points, each value chosen as the square root
// nearest the previous one. Midpoints are inserted (up to 20 bisections per
// gap) when the selection is unsafe; BranchAmbiguity is raised when
// refinement cannot separate the roots (path too close to a turning point).
std::vector<Complex> continue_sqrt(const FactoredRational& q,
                                   std::span<const Complex> path,
                                   const BranchState& start);

// Branch value of sqrt(q) at `to`, continued along the straight segment from
// a known value at `from` (same refinement rules as continue_sqrt).
Complex transport_sqrt(const FactoredRational& q, Complex from, Complex from_value,
                       Complex to);

// Order, leading coefficient and (for double poles) squared residue of q at
// a finite point or at infinity.
LocalData local_data(const FactoredRational& q, const SpherePoint& p);

// Radial / circular / log-spiral shape of the trajectories around a double
// pole, decided by the vanishing of Im / Re of the residue of sqrt(q). The
// result does not depend on the sign chosen for the residue square root.
DoublePoleForm classify_double_pole(const LocalData& d);

// Residue at infinity of sqrt(P) for a polynomial P of even degree, computed
// as (1/2πi) ∮ over a clockwise circle |z| = R with the branch fixed by
// sqrt(P) ~ sqrt(leading) z^{n/2} at infinity. The quadrature is refined
// until two successive doublings agree to 1e-10.
Complex residue_at_infinity_sqrt(const FactoredRational& P);

}  // namespace qdiff
