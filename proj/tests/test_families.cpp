#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qdiff/errors.hpp"
#include "qdiff/families.hpp"
#include "test_util.hpp"

using namespace qdiff;
using testutil::kPi;

TEST_CASE("first-kind zeros") {
  {
    auto [a, b] = laguerre_zeros(Complex(3, 0));
    CHECK(std::abs(a - Complex(9, 0)) < 1e-12);
    CHECK(std::abs(b - Complex(1, 0)) < 1e-12);
  }
  {
    auto [a, b] = laguerre_zeros(Complex(-1, 0));
    CHECK(std::abs(a - b) < 1e-12);  // coincident at C = -1
  }
  {
    auto [a, b] = laguerre_zeros(Complex(8, 0));
    CHECK(std::abs(a - Complex(16, 0)) < 1e-12);
    CHECK(std::abs(b - Complex(4, 0)) < 1e-12);
  }
}

TEST_CASE("first-kind differential and degeneracies") {
  auto q = laguerre_qd({Complex(3, 0)});
  CHECK(q.factors().size() == 3);
  CHECK(q.degree_at_infinity() == 0);
  CHECK_THROWS_AS(laguerre_qd({Complex(-1, 0)}), DegenerateParams);
  CHECK_THROWS_AS(laguerre_qd({Complex(0, 0)}), DegenerateParams);
}

TEST_CASE("second-kind zeros and differential") {
  {
    auto [a, b] = jacobi_zeros(Complex(1, 0), Complex(1, 0));
    CHECK(std::abs(a - Complex(std::sqrt(3.0) / 2.0, 0)) < 1e-12);
    CHECK(std::abs(b + Complex(std::sqrt(3.0) / 2.0, 0)) < 1e-12);
  }
  CHECK_THROWS_AS(jacobi_qd({Complex(-1, 0), Complex(1, 0)}), ConditionABViolated);
  CHECK_THROWS_AS(jacobi_qd({Complex(0, 0), Complex(0, 0)}), ZeroPoleCollision);
}

TEST_CASE("zero formulas satisfy their quadratics") {
  for (int k = 0; k < 40; ++k) {
    Complex C(0.37 * k - 3.0, 0.21 * (k % 7) - 0.6);
    if (std::abs(C + 1.0) < 0.05 || std::abs(C) < 0.05) continue;
    auto [a, b] = laguerre_zeros(C);
    auto D = [&](Complex z) { return z * z - 2.0 * (C + 2.0) * z + C * C; };
    double tol = 1e-10 * (1.0 + std::norm(C));
    CHECK(std::abs(D(a)) <= tol);
    CHECK(std::abs(D(b)) <= tol);
  }
  for (int k = 0; k < 40; ++k) {
    Complex A(0.3 * k - 2.0, 0.1 * (k % 5)), B(1.7, -0.2);
    double guard = std::abs(A + 1.0) * std::abs(B + 1.0) * std::abs(A + B + 1.0) *
                   std::abs(A + B + 2.0);
    if (guard < 1e-3) continue;
    auto [a, b] = jacobi_zeros(A, B);
    Complex lead = A + B + 2.0;
    auto D = [&](Complex z) {
      return lead * lead * z * z + 2.0 * (A * A - B * B) * z + (A - B) * (A - B) -
             4.0 * (A + B + 1.0);
    };
    double scale = 1.0 + std::norm(A) + std::norm(B);
    CHECK(std::abs(D(a)) <= 1e-8 * scale * std::norm(lead));
    CHECK(std::abs(D(b)) <= 1e-8 * scale * std::norm(lead));
  }
}

TEST_CASE("real C > -1 orders the zeros as 0 < b < a") {
  for (int k = 0; k < 50; ++k) {
    double C = -0.98 + 0.2 * k;
    if (std::abs(C) < 1e-9) continue;
    auto [a, b] = laguerre_zeros(Complex(C, 0));
    CHECK(a.imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(b.real() > 0.0);
    CHECK(b.real() < a.real());
  }
}

TEST_CASE("second-kind swap antisymmetry") {
  Complex A(2.3, 0.4), B(0.7, -0.1);
  auto [a1, b1] = jacobi_zeros(A, B);
  auto [a2, b2] = jacobi_zeros(B, A);
  CHECK(std::abs(a2 + b1) < 1e-12);
  CHECK(std::abs(b2 + a1) < 1e-12);
}

TEST_CASE("polynomial zeros: closed forms at degree one") {
  auto lag = laguerre_polynomial_zeros(1, 1.0);  // 2 - z
  REQUIRE(lag.size() == 1);
  CHECK(std::abs(lag[0] - Complex(2, 0)) < 1e-10);
  double lo = 3.0 - 2.0 * std::sqrt(2.0), hi = 3.0 + 2.0 * std::sqrt(2.0);
  CHECK(lag[0].real() > lo);
  CHECK(lag[0].real() < hi);

  auto jac = jacobi_polynomial_zeros(1, 1.0, 1.0);  // 2z
  REQUIRE(jac.size() == 1);
  CHECK(std::abs(jac[0]) < 1e-10);
}

TEST_CASE("polynomial zeros at degree 40 are real and land on the arc") {
  auto roots = laguerre_polynomial_zeros(40, 1.0);
  REQUIRE(roots.size() == 40);
  double lo = 3.0 - 2.0 * std::sqrt(2.0), hi = 3.0 + 2.0 * std::sqrt(2.0);
  for (Complex r : roots) {
    CHECK(std::abs(r.imag()) < 1e-6);
    CHECK(r.real() > 0.0);
    CHECK(r.real() < hi + 0.5);
  }
  // the zero-counting mass concentrates on [b(1), a(1)]
  Trajectory segment;
  segment.vertices = {Complex(lo, 0), Complex(hi, 0)};
  auto ov = zero_measure_overlay(roots, segment, 0.1);
  CHECK(ov.fraction >= 0.8);
  CHECK_THROWS_AS(laguerre_polynomial_zeros(500, 1.0), DegreeTooLarge);
}

TEST_CASE("overlay conventions") {
  Trajectory segment;
  segment.vertices = {Complex(0, 0), Complex(1, 0)};
  std::vector<Complex> on = {Complex(0.2, 0), Complex(0.9, 0)};
  CHECK(zero_measure_overlay(on, segment, 0.05).fraction == doctest::Approx(1.0));
  auto empty = zero_measure_overlay(std::vector<Complex>{}, segment, 0.05);
  CHECK(empty.fraction == doctest::Approx(1.0));
  CHECK(empty.empty_input);
  CHECK_THROWS_AS(zero_measure_overlay(on, segment, 0.0), std::invalid_argument);
}

TEST_CASE("sweeps") {
  TraceOptions opts;
  {  // 12-sample version of the path used by the acceptance suite
    auto r = sweep_laguerre(Complex(3, 0), Complex(-0.95, 0.1), 12, opts);
    CHECK(r.dichotomy_ok);
    CHECK(r.signature_constant);
    CHECK(r.samples.size() >= 12);
    for (const auto& s : r.samples) CHECK(s.report.found);
  }
  {  // single sample is trivially consistent
    auto r = sweep_laguerre(Complex(3, 0), Complex(3, 0), 1, opts);
    CHECK(r.dichotomy_ok);
    CHECK(r.samples.size() == 1);
  }
  {  // degenerate sample on the path
    CHECK_THROWS_AS(sweep_laguerre(Complex(-2, 0), Complex(0.5, 0), 11, opts),
                    DegenerateSample);
  }
  {  // short second-kind sweep
    auto r = sweep_jacobi(Complex(10, 0), Complex(10, 1), Complex(10, 0), 7, opts);
    CHECK(r.dichotomy_ok);
    for (const auto& s : r.samples) CHECK(s.report.found);
  }
}
