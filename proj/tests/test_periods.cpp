#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qdiff/errors.hpp"
#include "qdiff/periods.hpp"
#include "test_util.hpp"

using namespace qdiff;
using testutil::kPi;

namespace {

// ∫_{-1}^{1} sqrt(1-t^4) dt by adaptive Simpson on the real axis; the
// independent oracle for the boundary-value integral over the cut.
double real_quartic_integral() {
  auto f = [](double t) { return std::sqrt(std::max(0.0, 1.0 - t * t * t * t)); };
  struct Rec {
    double (*fn)(double);
  };
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double a, double fa, double b, double fb, double fm, double whole,
          int depth) -> double {
    double m = 0.5 * (a + b);
    double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth > 40 || std::abs(left + right - whole) < 1e-13)
      return left + right + (left + right - whole) / 15.0;
    return rec(a, fa, m, fm, flm, left, depth + 1) +
           rec(m, fm, b, fb, frm, right, depth + 1);
  };
  double fa = f(-1), fb = f(1), fm = f(0);
  return rec(-1, fa, 1, fb, fm, 2.0 / 6 * (fa + 4 * fm + fb), 0);
}

OrientedArc segment_arc(Complex a, Complex b, Side side = Side::Off) {
  return OrientedArc{{a, b}, side};
}

}  // namespace

TEST_CASE("integrate_sqrt of the unit integrand") {
  FactoredRational one(Complex(1, 0), {});
  auto arc = segment_arc(Complex(0, 0), Complex(1, 1));
  Complex v = integrate_sqrt(one, arc, BranchState{Complex(0, 0), Complex(1, 0)});
  CHECK(std::abs(v - Complex(1, 1)) < 1e-12);
}

TEST_CASE("boundary values on the real cut of z^4-1") {
  auto f = testutil::z4m1_polynomial();
  double oracle = real_quartic_integral();

  auto arc = segment_arc(Complex(-1, 0), Complex(1, 0), Side::Plus);
  // anchor on the cut: interpreted as the Plus germ, here sqrt(-1) = +i
  BranchState start{Complex(0, 0), Complex(0, 1)};
  Complex plus = integrate_sqrt(f, arc, start);
  CHECK(std::abs(plus.real()) < 1e-9);
  CHECK(std::abs(std::abs(plus.imag()) - oracle) < 1e-8);

  arc.side = Side::Minus;
  Complex minus = integrate_sqrt(f, arc, start);
  CHECK(std::abs(plus + minus) <= 1e-8 * std::abs(plus));
}

TEST_CASE("side antisymmetry on a curved cut") {
  auto f = testutil::z4m1_polynomial();
  OrientedArc arc{testutil::right_bulge_arc(), Side::Plus};
  BranchState anchor{Complex(2.5, 0), std::sqrt(evaluate(f, Complex(2.5, 0)))};
  Complex plus = integrate_sqrt(f, arc, anchor);
  arc.side = Side::Minus;
  Complex minus = integrate_sqrt(f, arc, anchor);
  CHECK(std::abs(plus + minus) <= 1e-8 * (std::abs(plus) + 1e-30));
}

TEST_CASE("condition check") {
  // Re = 0 on the trajectory of the first-kind differential: integrand is
  // the negated differential, +D_3(z)/z^2.
  FactoredRational R3(Complex(1, 0),
                      {{Complex(9, 0), 1}, {Complex(1, 0), 1}, {Complex(0, 0), -2}});
  auto rep = condition_check(R3, segment_arc(Complex(1, 0), Complex(9, 0), Side::Plus));
  CHECK(rep.passes);

  FactoredRational one(Complex(1, 0), {});
  CHECK_FALSE(condition_check(one, segment_arc(Complex(0, 0), Complex(1, 0))).passes);

  FactoredRational minus_one(Complex(-1, 0), {});
  CHECK(condition_check(minus_one, segment_arc(Complex(0, 0), Complex(1, 0))).passes);
}

TEST_CASE("contour integrals and branch closure") {
  auto f = testutil::z4m1_polynomial();
  OrientedArc big{testutil::circle_polyline(Complex(0, 0), 3.0, 96), Side::Off};
  Complex v = contour_integral_sqrt(f, big);
  CHECK(std::abs(v) < 1e-8);  // ±2πi res_inf = 0

  FactoredRational sq(Complex(1, 0), {{Complex(0, 0), 2}});
  OrientedArc around2{testutil::circle_polyline(Complex(2, 0), 1.0, 64), Side::Off};
  CHECK(std::abs(contour_integral_sqrt(sq, around2)) < 1e-10);  // ∮ z dz = 0

  OrientedArc around_zero{testutil::circle_polyline(Complex(1, 0), 0.5, 64), Side::Off};
  CHECK_THROWS_AS(contour_integral_sqrt(f, around_zero), BranchNotClosed);
}

TEST_CASE("deformation invariance of closed contours") {
  auto f = testutil::z4m1_polynomial();
  // two contours around the pair ±1, one rectangular, one elliptical
  std::vector<Complex> rect = {Complex(-1.4, -0.4), Complex(1.4, -0.4), Complex(1.4, 0.4),
                               Complex(-1.4, 0.4), Complex(-1.4, -0.4)};
  std::vector<Complex> ellipse;
  for (int k = 0; k <= 128; ++k) {
    double th = 2 * kPi * k / 128;
    ellipse.push_back(Complex(1.6 * std::cos(th), 0.5 * std::sin(th)));
  }
  ellipse.back() = ellipse.front();
  // both anchors carry the branch ~ z^2 at infinity, reached through
  // zero-free regions near each contour's first vertex
  Complex a = contour_integral_sqrt(f, OrientedArc{rect, Side::Off},
                                    BranchState{Complex(-3, 0), std::sqrt(80.0)});
  Complex b = contour_integral_sqrt(f, OrientedArc{ellipse, Side::Off},
                                    BranchState{Complex(3, 0), std::sqrt(80.0)});
  CHECK(std::abs(a - b) <= 1e-8 * (1.0 + std::abs(a)));
}

TEST_CASE("the two-cut identity: 2I equals the encircling contours") {
  auto f = testutil::z4m1_polynomial();
  std::vector<Complex> cut1 = {Complex(-1, 0), Complex(1, 0)};
  std::vector<Complex> gamma = testutil::right_bulge_arc();

  // I1: + side of [-1,1], branch ~ z^2 at infinity (germ -sqrt(15) at 2i).
  Complex I1 = integrate_sqrt(f, OrientedArc{cut1, Side::Plus},
                              BranchState{Complex(0, 2), -std::sqrt(15.0)});
  // I2: + side of gamma, germ +sqrt(f(2.5)) at 2.5 reached from +infinity.
  Complex I2 = integrate_sqrt(f, OrientedArc{gamma, Side::Plus},
                              BranchState{Complex(2.5, 0), std::sqrt(38.0625)});

  // Clockwise bands around each cut, anchored on the same global branch.
  auto band1 = testutil::build_band(cut1, 0.2);
  auto band2 = testutil::build_band(gamma, 0.1);
  Complex J1 = contour_integral_sqrt(f, OrientedArc{band1, Side::Off},
                                     BranchState{Complex(0, 2), -std::sqrt(15.0)});
  Complex J2 = contour_integral_sqrt(f, OrientedArc{band2, Side::Off},
                                     BranchState{Complex(0, 1.5), -std::sqrt(4.0625)});

  CHECK(std::abs(2.0 * I1 - J1) < 1e-7);
  CHECK(std::abs(2.0 * I2 - J2) < 1e-7);
  CHECK(std::abs(2.0 * (I1 + I2) - (J1 + J2)) < 1e-7);
  // and the common value is pinned by the vanishing residue at infinity
  CHECK(std::abs(I1 + I2) < 1e-7);
}

TEST_CASE("first-kind quantization") {
  Complex C(1, 0);
  Complex a = C + 2.0 + 2.0 * std::sqrt(C + 1.0);
  Complex b = C + 2.0 - 2.0 * std::sqrt(C + 1.0);

  auto direct = laguerre_quantization(C, segment_arc(b, a, Side::Plus));
  REQUIRE(direct.matched.has_value());
  CHECK(std::abs(std::abs(direct.matched->imag()) - 2 * kPi) < 1e-9);
  CHECK(std::abs(direct.value - *direct.matched) < 1e-8);

  // detour once around the pole at 0: the class jumps to ±2πi (C+1)
  OrientedArc detour;
  detour.side = Side::Plus;
  detour.vertices.push_back(b);
  for (int k = 1; k <= 24; ++k) {
    double t = static_cast<double>(k) / 24;
    detour.vertices.push_back(std::polar(std::abs(b) * (1.0 + t), -2 * kPi * t));
  }
  detour.vertices.push_back(a);
  auto looped = laguerre_quantization(C, detour);
  REQUIRE(looped.matched.has_value());
  CHECK(std::abs(std::abs(looped.matched->imag()) - 4 * kPi) < 1e-9);  // ±2πi(C+1), C=1

  CHECK_THROWS_AS(laguerre_quantization(Complex(-1, 0), segment_arc(b, a)), DegenerateC);
  CHECK_THROWS_AS(laguerre_quantization(Complex(0, 0), segment_arc(b, a)), DegenerateC);
}

TEST_CASE("second-kind quantization") {
  {
    Complex A(1, 0), B(1, 0);
    double r = std::sqrt(3.0) / 2.0;
    auto res = jacobi_quantization(A, B, segment_arc(Complex(-r, 0), Complex(r, 0),
                                                     Side::Plus));
    REQUIRE(res.matched.has_value());
    CHECK(std::abs(std::abs(res.matched->imag()) - 2 * kPi) < 1e-9);
    CHECK(std::abs(res.value - *res.matched) <= 1e-6 * (1.0 + 2 * kPi * 3.0));
    REQUIRE(res.endpoints_ok.has_value());
    CHECK(*res.endpoints_ok);
  }
  {
    Complex A(10, 0), B(10, 0);
    double r = std::sqrt(21.0) / 11.0;
    auto res = jacobi_quantization(A, B, segment_arc(Complex(-r, 0), Complex(r, 0),
                                                     Side::Plus));
    REQUIRE(res.matched.has_value());
    CHECK(std::abs(std::abs(res.matched->imag()) - 2 * kPi) < 1e-9);
    REQUIRE(res.endpoints_ok.has_value());
    CHECK(*res.endpoints_ok);
    // one global sign realizes sqrt(D)(1) = 2A and sqrt(D)(-1) = -2B
    REQUIRE(res.endpoint_value_plus.has_value());
    REQUIRE(res.endpoint_value_minus.has_value());
    Complex vp = *res.endpoint_value_plus, vm = *res.endpoint_value_minus;
    bool direct = std::abs(vp - 20.0) < 1e-6 * 21 && std::abs(vm + 20.0) < 1e-6 * 21;
    bool flipped = std::abs(vp + 20.0) < 1e-6 * 21 && std::abs(vm - 20.0) < 1e-6 * 21;
    CHECK((direct || flipped));
  }
  CHECK_THROWS_AS(jacobi_quantization(Complex(-1, 0), Complex(1, 0),
                                      segment_arc(Complex(0, 0), Complex(1, 0))),
                  ConditionABViolated);
}

TEST_CASE("quantization residuals across a 20-point parameter sample") {
  for (int k = 0; k < 20; ++k) {
    Complex C(0.5 + 0.25 * k, 0.15);
    Complex a = C + 2.0 + 2.0 * std::sqrt(C + 1.0);
    Complex b = C + 2.0 - 2.0 * std::sqrt(C + 1.0);
    auto res = laguerre_quantization(C, segment_arc(b, a, Side::Plus));
    double scale = 1.0 + 2 * kPi * (1.0 + std::abs(C + 1.0));
    double best = 1e300;
    for (Complex m : res.admissible) best = std::min(best, std::abs(res.value - m));
    CHECK(best <= 1e-6 * scale);
    CHECK(res.matched.has_value());
  }
  for (int k = 0; k < 20; ++k) {
    Complex A(1.0 + 0.4 * k, 0), B(2, 0);
    Complex lead = A + B + 2.0;
    Complex disc = 4.0 * std::sqrt((A + 1.0) * (B + 1.0) * (A + B + 1.0));
    Complex a = (B * B - A * A + disc) / (lead * lead);
    Complex b = (B * B - A * A - disc) / (lead * lead);
    auto res = jacobi_quantization(A, B, segment_arc(b, a, Side::Plus));
    double max_mag = 1.0;
    for (Complex m : res.admissible) max_mag = std::max(max_mag, std::abs(m));
    double best = 1e300;
    for (Complex m : res.admissible) best = std::min(best, std::abs(res.value - m));
    CHECK(best <= 1e-6 * (1.0 + max_mag));
  }
}

TEST_CASE("arc validation") {
  Complex C(1, 0);
  Complex a = C + 2.0 + 2.0 * std::sqrt(C + 1.0);
  Complex b = C + 2.0 - 2.0 * std::sqrt(C + 1.0);
  // arc not joining the zeros
  CHECK_THROWS_AS(laguerre_quantization(C, segment_arc(Complex(0.5, 0), a)),
                  std::invalid_argument);
  // arc through the weight pole at 0
  OrientedArc through0{{b, Complex(0, 0), Complex(-1, 0), a}, Side::Plus};
  CHECK_THROWS_AS(laguerre_quantization(C, through0), PoleOnPath);
}
