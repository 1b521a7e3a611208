#include "qdiff/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdiff {

SpherePoint::SpherePoint(Complex z) : z_(z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::invalid_argument("SpherePoint: coordinates must be finite");
}

SpherePoint SpherePoint::infinity() { return SpherePoint(); }

Complex SpherePoint::value() const {
  if (infinite_) throw std::logic_error("SpherePoint: value() at infinity");
  return z_;
}

FactoredRational::FactoredRational(Complex coefficient, std::vector<Factor> factors)
    : coefficient_(coefficient), factors_(std::move(factors)) {
  if (coefficient_ == Complex(0.0, 0.0) || !std::isfinite(coefficient_.real()) ||
      !std::isfinite(coefficient_.imag()))
    throw std::invalid_argument("FactoredRational: coefficient must be finite and nonzero");
  for (const auto& f : factors_) {
    if (f.multiplicity == 0)
      throw std::invalid_argument("FactoredRational: zero multiplicity");
    if (!std::isfinite(f.root.real()) || !std::isfinite(f.root.imag()))
      throw std::invalid_argument("FactoredRational: non-finite root");
  }
  for (std::size_t i = 0; i < factors_.size(); ++i)
    for (std::size_t j = i + 1; j < factors_.size(); ++j)
      if (factors_[i].root == factors_[j].root)
        throw std::invalid_argument("FactoredRational: roots must be pairwise distinct");
}

int FactoredRational::degree_at_infinity() const {
  int n = 0;
  for (const auto& f : factors_) n += f.multiplicity;
  return n;
}

std::vector<Complex> FactoredRational::zeros() const {
  std::vector<Complex> out;
  for (const auto& f : factors_)
    if (f.multiplicity > 0) out.push_back(f.root);
  return out;
}

std::vector<Complex> FactoredRational::poles() const {
  std::vector<Complex> out;
  for (const auto& f : factors_)
    if (f.multiplicity < 0) out.push_back(f.root);
  return out;
}

FactoredRational negated(const FactoredRational& q) {
  return FactoredRational(-q.coefficient(), q.factors());
}

PointClass classify_order(int order) {
  if (order == 0) return PointClass::Regular;
  if (order >= 1 || order == -1) return PointClass::FiniteCritical;
  return PointClass::InfiniteCritical;
}

std::vector<CriticalPoint> critical_points(const FactoredRational& q) {
  std::vector<CriticalPoint> out;
  for (const auto& f : q.factors())
    out.push_back({SpherePoint(f.root), f.multiplicity, classify_order(f.multiplicity)});
  std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    Complex za = a.location.value(), zb = b.location.value();
    if (za.real() != zb.real()) return za.real() < zb.real();
    return za.imag() < zb.imag();
  });
  int order_inf = -(q.degree_at_infinity() + 4);
  if (order_inf != 0)
    out.push_back({SpherePoint::infinity(), order_inf, classify_order(order_inf)});
  return out;
}

double critical_scale(const FactoredRational& q) {
  double s = 1.0;
  for (const auto& f : q.factors()) s = std::max(s, std::abs(f.root));
  return s;
}

}  // namespace qdiff
