#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace qdiff {

using Complex = std::complex<double>;

// A point on the Riemann sphere: a finite complex number or the point at
// infinity. Finite coordinates must be finite doubles; infinity is a tag,
// never a coordinate pair.
class SpherePoint {
 public:
  SpherePoint(Complex z);  // implicit on purpose: finite points are the norm
  static SpherePoint infinity();

  bool is_infinity() const { return infinite_; }
  Complex value() const;  // throws std::logic_error when called at infinity

 private:
  SpherePoint() : infinite_(true) {}
  Complex z_{0.0, 0.0};
  bool infinite_ = false;
};

struct Factor {
  Complex root{0.0, 0.0};
  int multiplicity = 0;  // > 0 zero, < 0 pole; never 0
};

// q(z) = coefficient * prod_i (z - root_i)^{mult_i}, kept in factored form so
// that every critical point is known by construction. The quadratic
// differential under study is q(z) dz^2.
class FactoredRational {
 public:
  FactoredRational(Complex coefficient, std::vector<Factor> factors);

  const Complex& coefficient() const { return coefficient_; }
  const std::vector<Factor>& factors() const { return factors_; }

  // Sum of multiplicities; q ~ coefficient * z^n at infinity, and infinity is
  // a pole of order n + 4 of the quadratic differential (negative = zero).
  int degree_at_infinity() const;

  std::vector<Complex> zeros() const;  // roots with positive multiplicity
  std::vector<Complex> poles() const;  // roots with negative multiplicity

 private:
  Complex coefficient_;
  std::vector<Factor> factors_;
};

FactoredRational negated(const FactoredRational& q);

// A chosen value of sqrt(q) at an anchor point; fixes the branch used by
// continuation. value^2 must equal q(anchor) to 1e-10 relative.
struct BranchState {
  Complex anchor{0.0, 0.0};
  Complex value{0.0, 0.0};
};

// Local expansion q(z) ~ leading * (z - p)^order; at infinity the order and
// leading refer to the chart w = 1/z, where the differential picks up w^-4.
struct LocalData {
  SpherePoint point;
  int order = 0;
  Complex leading{0.0, 0.0};
  std::optional<Complex> residue_sq;  // set iff order == -2; fixed up to sign
};

enum class PointClass { Regular, FiniteCritical, InfiniteCritical };

// Zeros and simple poles are finite critical points, poles of order >= 2 are
// infinite ones.
PointClass classify_order(int order);

struct CriticalPoint {
  SpherePoint location;
  int order = 0;
  PointClass cls = PointClass::Regular;
};

// Finite critical points (sorted by real then imaginary part) followed by the
// point at infinity when it is not regular.
std::vector<CriticalPoint> critical_points(const FactoredRational& q);

// S = max(1, max |finite critical point|); used for scale-free defaults.
double critical_scale(const FactoredRational& q);

}  // namespace qdiff
