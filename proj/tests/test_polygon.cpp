#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "qdiff/errors.hpp"
#include "qdiff/polygon.hpp"
#include "qdiff/tracer.hpp"
#include "test_util.hpp"

using namespace qdiff;
using testutil::kPi;

TEST_CASE("angle-sum residuals") {
  // two simple-zero corners of angle 2pi/3 with a double pole inside
  PolygonData with_pole{{{1, 2 * kPi / 3}, {1, 2 * kPi / 3}}, {-2}};
  CHECK(teichmuller_residual(with_pole) == doctest::Approx(0.0).epsilon(1e-12));

  // same corners with nothing inside: the impossible two-sided polygon
  PolygonData empty_interior{{{1, 2 * kPi / 3}, {1, 2 * kPi / 3}}, {}};
  CHECK(teichmuller_residual(empty_interior) == doctest::Approx(-2.0).epsilon(1e-12));

  PolygonData mixed{{{1, 4 * kPi / 3}, {1, 2 * kPi / 3}}, {-1, -2}};
  CHECK(teichmuller_residual(mixed) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("residual is invariant under cyclic vertex reordering") {
  PolygonData p{{{1, 4 * kPi / 3}, {0, kPi / 2}, {1, 2 * kPi / 3}, {2, kPi}}, {-1, -2}};
  double base = teichmuller_residual(p);
  for (int shift = 1; shift < 4; ++shift) {
    PolygonData rotated = p;
    std::rotate(rotated.vertices.begin(), rotated.vertices.begin() + shift,
                rotated.vertices.end());
    CHECK(teichmuller_residual(rotated) == doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("interior angle between the two free rays at z = 1") {
  auto q = testutil::z4m1_differential();
  TraceOptions opts = TraceOptions{}.resolved_for(q);
  // rays at pi/3 and 5pi/3; the sector between them through direction 0
  auto up = trace(q, Complex(1, 0), kPi / 3, opts, FoliationKind::Horizontal);
  auto down = trace(q, Complex(1, 0), 5 * kPi / 3, opts, FoliationKind::Horizontal);
  auto angle = measure_interior_angle(q, Complex(1, 0), up, down, Complex(2, 0),
                                      10 * opts.hit_radius);
  CHECK(angle.snapped);
  CHECK(angle.angle == doctest::Approx(2 * kPi / 3).epsilon(1e-12));
  CHECK(std::abs(angle.raw - 2 * kPi / 3) < 0.05);
}

TEST_CASE("regular corner between the two foliations snaps to pi/2") {
  FactoredRational one(Complex(1, 0), {});
  TraceOptions opts;
  opts.hit_radius = 1e-4;
  opts.escape_radius = 5.0;
  opts.max_phi_length = 20.0;
  auto h = trace(one, Complex(0, 0), 0.0, opts, FoliationKind::Horizontal);
  auto v = trace(one, Complex(0, 0), kPi / 2, opts, FoliationKind::Vertical);
  auto angle = measure_interior_angle(one, Complex(0, 0), h, v, Complex(1, 1), 1e-3);
  CHECK(angle.snapped);
  CHECK(angle.angle == doctest::Approx(kPi / 2));
}

TEST_CASE("edges that do not reach the vertex are rejected") {
  FactoredRational one(Complex(1, 0), {});
  Trajectory e1, e2;
  e1.vertices = {Complex(0.5, 0), Complex(2, 0)};
  e2.vertices = {Complex(0, 0.5), Complex(0, 2)};
  CHECK_THROWS_AS(
      measure_interior_angle(one, Complex(0, 0), e1, e2, Complex(1, 1), 1e-3),
      EdgesDontMeet);
}

TEST_CASE("a polygon assembled from traced trajectories balances exactly") {
  // the loop at the inner zero of the C=3 first-kind graph encircles the
  // double pole: one corner of 2pi/3, interior multiplicity -2
  FactoredRational lag(Complex(-1, 0),
                       {{Complex(9, 0), 1}, {Complex(1, 0), 1}, {Complex(0, 0), -2}});
  TraceOptions opts = TraceOptions{}.resolved_for(lag);
  LocalData ld = local_data(lag, SpherePoint(Complex(1, 0)));
  auto dirs = emanation_directions(ld, FoliationKind::Horizontal);
  REQUIRE(dirs.size() == 3);
  // the two non-segment rays leave at 2pi/3 and 4pi/3
  auto upper = trace(lag, Complex(1, 0), dirs[1], opts, FoliationKind::Horizontal);
  auto lower = trace(lag, Complex(1, 0), dirs[2], opts, FoliationKind::Horizontal);
  REQUIRE(upper.termination.kind == TerminationKind::HitCriticalPoint);
  CHECK(std::abs(upper.termination.point - Complex(1, 0)) < 1e-9);

  auto angle = measure_interior_angle(lag, Complex(1, 0), upper, lower, Complex(0.5, 0),
                                      10 * opts.hit_radius);
  CHECK(angle.snapped);
  PolygonData loop_polygon{{{1, angle.angle}}, {-2}};
  CHECK(teichmuller_residual(loop_polygon) == doctest::Approx(0.0).epsilon(1e-12));
}
