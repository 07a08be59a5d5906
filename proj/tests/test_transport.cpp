#include "finsler/errors.hpp"
#include "finsler/indicatrix.hpp"
#include "finsler/loop.hpp"
#include "finsler/transport.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace finsler;

TEST_CASE("loop construction and parsing") {
  const LoopCurve sq = LoopCurve::square(Vec2(0.1, -0.2), 0.5);
  CHECK(sq.segments().size() == 4);
  CHECK(sq.closed());
  CHECK(sq.length() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sq.orientation() == 1);
  CHECK(sq.reversed().orientation() == -1);
  CHECK((sq.start() - Vec2(0.1, -0.2)).norm() < 1e-15);
  CHECK((sq.segments()[0].end() - Vec2(0.6, -0.2)).norm() < 1e-15);
  CHECK((sq.segments()[1].end() - Vec2(0.6, 0.3)).norm() < 1e-15);

  const LoopCurve parsed = LoopCurve::parse("square:0,0,0.2");
  CHECK(parsed.length() == doctest::Approx(0.8));
  const LoopCurve tri = LoopCurve::parse("polyline:0,0;0.3,0;0,0.3");
  CHECK(tri.segments().size() == 3);
  CHECK(tri.closed());
  CHECK(tri.orientation() == 1);

  const LoopCurve arc({CurveSegment::arc(Vec2::Zero(), 0.2, 0.0, 2.0 * std::numbers::pi)});
  CHECK(arc.closed());
  CHECK(arc.length() == doctest::Approx(0.4 * std::numbers::pi).epsilon(1e-12));

  // zero-length segments are dropped
  const LoopCurve pts = LoopCurve::polyline({Vec2(0, 0), Vec2(0, 0), Vec2(0.1, 0), Vec2(0, 0.1)});
  CHECK(pts.segments().size() == 3);

  CHECK_THROWS_AS(LoopCurve::parse("circle:0,0,1"), std::invalid_argument);
  CHECK_THROWS_AS(LoopCurve::parse("square:0,0"), std::invalid_argument);
  CHECK(LoopCurve::parse("polyline:0,0").empty());
  CHECK_THROWS_AS(LoopCurve({CurveSegment::line(Vec2(0, 0), Vec2(1, 0)), CurveSegment::line(Vec2(0, 1), Vec2(1, 1))}),
                  std::invalid_argument);
}

TEST_CASE("geodesics") {
  SUBCASE("Euclidean lines") {
    const GeodesicResult g = geodesic(FinslerMetric::euclidean(), Vec2(0.3, 0.4), Vec2(1.0, -2.0), 2.0);
    CHECK_FALSE(g.left_domain);
    for (const auto& s : g.samples) CHECK((s.x - (Vec2(0.3, 0.4) + s.t * Vec2(1.0, -2.0))).norm() < 1e-12);
  }
  SUBCASE("Funk from the origin along e1") {
    const GeodesicResult g = geodesic(FinslerMetric::funk(1), Vec2::Zero(), Vec2(1.0, 0.0), 5.0);
    double last = -1.0;
    for (const auto& s : g.samples) {
      CHECK(std::abs(s.x[1]) < 1e-14);
      CHECK(s.x[0] > last);
      CHECK(s.x[0] < 1.0);
      last = s.x[0];
    }
    CHECK(last > 0.9);
  }
  SUBCASE("Funk chord deviation") {
    const Vec2 x0(0.1, 0.2), y0(0.3, -0.1);
    const GeodesicResult g = geodesic(FinslerMetric::funk(1), x0, y0, 3.0);
    CHECK(g.samples.size() > 10);
    CHECK(chord_deviation(g, x0, y0) <= 1e-8);
  }
  SUBCASE("leaving the disk halts the integration") {
    const GeodesicResult g = geodesic(FinslerMetric::funk(-1), Vec2(0.5, 0.0), Vec2(1.0, 0.0), 50.0);
    CHECK(g.left_domain);
    CHECK(g.exit_time < 50.0);
    for (const auto& s : g.samples) CHECK(s.x.norm() < 1.0);
  }
  CHECK_THROWS_AS(geodesic(FinslerMetric::funk(1), Vec2::Zero(), Vec2::Zero(), 1.0), DomainError);
  CHECK_THROWS_AS(geodesic(FinslerMetric::funk(1), Vec2(2.0, 0.0), Vec2(1.0, 0.0), 1.0), DomainError);
}

TEST_CASE("parallel transport") {
  const FinslerMetric funk = FinslerMetric::funk(1);

  SUBCASE("Euclidean transport is trivial") {
    const LoopCurve c = LoopCurve::parse("polyline:0,0;0.5,0.1;0.2,0.7");
    const TransportResult r = parallel_transport(FinslerMetric::euclidean(), c, Vec2(0.3, -1.2));
    CHECK((r.fiber - Vec2(0.3, -1.2)).norm() < 1e-14);
  }
  SUBCASE("norm preserved around a square") {
    const TransportResult r = parallel_transport(funk, LoopCurve::square(Vec2::Zero(), 0.1), Vec2(1.0, 0.0));
    CHECK(std::abs(funk.norm(Vec2::Zero(), r.fiber) - 1.0) <= 1e-8);
    CHECK(r.norm_drift <= 1e-8);
    CHECK_FALSE(r.drift_exceeded);
  }
  SUBCASE("geodesic velocity is self-parallel") {
    const Vec2 x0(-0.2, 0.1), dir(0.6, 0.3);
    const GeodesicResult g = geodesic(funk, x0, dir, 1.0);
    const Vec2 x1 = g.samples.back().x;
    const TransportResult r = parallel_transport(funk, CurveSegment::line(x0, x1), dir);
    const Vec2 u = r.fiber.normalized(), d = dir.normalized();
    CHECK(std::abs(u[0] * d[1] - u[1] * d[0]) < 1e-9);
    CHECK(u.dot(d) > 0.0);
  }
  SUBCASE("reversibility") {
    std::mt19937_64 rng(5);
    for (int n = 0; n < 5; ++n) {
      const Vec2 a = finsler::testing::random_base(rng, 0.6), b = finsler::testing::random_base(rng, 0.6);
      const Vec2 y0 = finsler::testing::random_fiber(rng, 0.5, 1.5);
      const CurveSegment seg = CurveSegment::arc((a + b) / 2, (b - a).norm() / 2, 0.3, 2.5);
      const TransportResult forth = parallel_transport(funk, seg, y0);
      const TransportResult back = parallel_transport(funk, seg.reversed(), forth.fiber);
      CHECK((back.fiber - y0).norm() / y0.norm() <= 1e-7);
    }
  }
  SUBCASE("curves leaving the domain are rejected") {
    CHECK_THROWS_AS(parallel_transport(funk, CurveSegment::line(Vec2::Zero(), Vec2(1.5, 0.0)), Vec2(1, 0)),
                    SolverError);
  }
  CHECK_THROWS_AS(parallel_transport(funk, CurveSegment::line(Vec2::Zero(), Vec2(0.1, 0)), Vec2::Zero()),
                  DomainError);
}

TEST_CASE("loop holonomy") {
  const FinslerMetric funk = FinslerMetric::funk(1);

  SUBCASE("flat and degenerate loops give the identity") {
    const HolonomyResult e = loop_holonomy(FinslerMetric::euclidean(), LoopCurve::square(Vec2(0.2, 0.2), 0.3), 32);
    CHECK(distance(e.map, CircleMap::identity(32)) < 1e-12);
    const HolonomyResult d = loop_holonomy(funk, LoopCurve::polyline({Vec2(0.1, 0.1), Vec2(0.1, 0.1)}), 32);
    CHECK(distance(d.map, CircleMap::identity(32)) == 0.0);
  }
  SUBCASE("Funk square is nontrivial with a nearly uniform displacement") {
    const double s = 0.2;
    const HolonomyResult h = loop_holonomy(funk, LoopCurve::square(Vec2::Zero(), s), 64);
    CHECK(h.max_norm_drift <= 1e-8);
    for (double d : h.map.displacement()) {
      CHECK(d < 0.0);
      CHECK(d / (s * s) == doctest::Approx(-0.25).epsilon(0.3));
    }
  }
  SUBCASE("reversed loop gives the inverse map") {
    const LoopCurve loop = LoopCurve::square(Vec2(0.1, 0.0), 0.15);
    const HolonomyResult fwd = loop_holonomy(funk, loop, 64);
    const HolonomyResult bwd = loop_holonomy(funk, loop.reversed(), 64);
    CHECK(distance(compose(bwd.map, fwd.map), CircleMap::identity(64)) < 1e-6);
  }
  SUBCASE("concatenated loops compose, up to interpolation error") {
    const LoopCurve l1 = LoopCurve::square(Vec2::Zero(), 0.2);
    const LoopCurve l2 = LoopCurve::polyline({Vec2::Zero(), Vec2(-0.2, 0.1), Vec2(-0.1, -0.25)});
    double err[2];
    int i = 0;
    for (int n : {256, 512}) {
      const CircleMap both = loop_holonomy(funk, l1.then(l2), n).map;
      // transport along l1 then l2 is phi_2 o phi_1
      const CircleMap composed = compose(loop_holonomy(funk, l2, n).map, loop_holonomy(funk, l1, n).map);
      err[i++] = distance(both, composed);
    }
    CHECK(err[0] < 1e-6);
    CHECK(err[1] < 1e-6);
  }
  CHECK_THROWS_AS(loop_holonomy(funk, LoopCurve::square(Vec2::Zero(), 0.1), 8), std::invalid_argument);
  CHECK_THROWS_AS(loop_holonomy(funk, LoopCurve({CurveSegment::line(Vec2(0, 0), Vec2(0.1, 0))}), 32),
                  std::invalid_argument);
}

TEST_CASE("small-loop field") {
  const std::vector<double> sides{0.2, 0.1, 0.05};
  SUBCASE("Euclidean gives zero") {
    const SmallLoopReport r = small_loop_field(FinslerMetric::euclidean(), Vec2::Zero(), sides, 32, 8);
    CHECK(r.field.max_coefficient() < 1e-12);
    CHECK_FALSE(r.observed_order.has_value());
  }
  SUBCASE("Funk origin: constant field equal to the curvature field") {
    const SmallLoopReport r = small_loop_field(FinslerMetric::funk(1), Vec2::Zero(), sides, 64, 8);
    CHECK(r.converged);
    CHECK(r.field.a0() == doctest::Approx(-0.25).epsilon(1e-3));
    CHECK(r.field.nonconstant_energy() <= 0.01 * r.field.energy());
  }
  SUBCASE("Funk off-origin: agrees with the curvature field") {
    const Vec2 x0(0.3, 0.0);
    const FinslerMetric funk = FinslerMetric::funk(1);
    const SmallLoopReport r = small_loop_field(funk, x0, {0.1, 0.05, 0.025}, 64, 8);
    const CircleVectorField xi = curvature_field(funk, x0, Vec2(1, 0), Vec2(0, 1), 64, 8);
    CHECK((r.field - xi).sup_norm() <= 1e-3);
  }
  CHECK_THROWS_AS(small_loop_field(FinslerMetric::funk(1), Vec2::Zero(), {0.1, 0.2, 0.05}, 32, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(small_loop_field(FinslerMetric::funk(1), Vec2::Zero(), {0.1, 0.05}, 32, 8), std::invalid_argument);
}
