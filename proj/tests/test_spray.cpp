#include "finsler/errors.hpp"
#include "finsler/spray.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace finsler;

namespace {

// Largest componentwise difference relative to the largest entry of the reference.
double tensor_rel_diff(const SprayData& a, const SprayData& b) {
  auto rel = [](double diff, double scale) { return diff / std::max(scale, 1e-300); };
  double worst = rel((a.G - b.G).cwiseAbs().maxCoeff(), b.G.cwiseAbs().maxCoeff());
  worst = std::max(worst, rel((a.Gj - b.Gj).cwiseAbs().maxCoeff(), b.Gj.cwiseAbs().maxCoeff()));
  double scale = 0.0, diff = 0.0;
  for (int i = 0; i < 2; ++i) {
    scale = std::max(scale, b.Gjk[i].cwiseAbs().maxCoeff());
    diff = std::max(diff, (a.Gjk[i] - b.Gjk[i]).cwiseAbs().maxCoeff());
  }
  return std::max(worst, rel(diff, scale));
}

} // namespace

TEST_CASE("generic and projective sprays agree for Funk") {
  std::mt19937_64 rng(23);
  for (int sign : {1, -1}) {
    const FinslerMetric metric = FinslerMetric::funk(sign);
    for (int n = 0; n < 40; ++n) {
      const Vec2 x = finsler::testing::random_base(rng, 0.8);
      const Vec2 y = finsler::testing::random_fiber(rng, 0.3, 2.0);
      CHECK(tensor_rel_diff(spray_generic(metric, x, y), spray_projective(metric, x, y)) < 1e-6);
    }
  }
}

TEST_CASE("spray homogeneity and Euler relations") {
  const FinslerMetric metric = FinslerMetric::funk(1);
  const Vec2 x(0.3, -0.2), y(0.7, 0.4);
  const SprayData s = spray_generic(metric, x, y);
  CHECK((s.Gj * y - 2.0 * s.G).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 0; i < 2; ++i) {
    CHECK((s.Gjk[i] * y - s.Gj.row(i).transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(s.Gjk[i](0, 1) - s.Gjk[i](1, 0)) < 1e-14);
  }
  const SprayData s2 = spray_generic(metric, x, 2.0 * y);
  CHECK((s2.G - 4.0 * s.G).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fast paths agree with the full spray") {
  const Vec2 x(-0.1, 0.45), y(0.2, -1.3);
  for (const auto& metric : {FinslerMetric::funk(1), FinslerMetric::funk(-1)}) {
    const SprayData s = spray_generic(metric, x, y);
    CHECK((geodesic_coefficients(metric, x, y) - s.G).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((nonlinear_connection(metric, x, y) - s.Gj).cwiseAbs().maxCoeff() < 1e-10);
  }
  // norm-only metric exercises the generic fast paths
  const FinslerMetric plus = FinslerMetric::funk(1);
  const FinslerMetric norm_only = FinslerMetric::custom(
      "funk-norm-only", [plus](const JetPoint& p) { return plus.norm(p); },
      [](const Vec2& b) { return b.norm() < 0.99; });
  CHECK(preferred_path(norm_only) == SprayPath::Generic);
  const SprayData s = spray_projective(plus, x, y);
  CHECK((geodesic_coefficients(norm_only, x, y) - s.G).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((nonlinear_connection(norm_only, x, y) - s.Gj).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Euclidean spray vanishes") {
  const SprayData s = spray_generic(FinslerMetric::euclidean(), Vec2(1.0, 2.0), Vec2(0.5, -0.5));
  CHECK(s.G.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(s.Gj.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Funk curvature at the origin") {
  const Vec2 y(1.0, 0.0);
  for (int sign : {1, -1}) {
    const FinslerMetric metric = FinslerMetric::funk(sign);
    const CurvatureTensor R = curvature_tensor(metric, Vec2::Zero(), y);
    const CurvatureTensor model = constant_curvature_tensor(-0.25, Mat2::Identity(), y);
    for (int i = 0; i < 2; ++i) {
      CHECK((R[i] - model[i]).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(R[i](0, 1) + R[i](1, 0)) < 1e-14);
      CHECK(std::abs(R[i](0, 0)) < 1e-14);
    }
    // R^2_12 = lambda g_1m y^m on the unit direction e1
    CHECK(R[1](0, 1) == doctest::Approx(-0.25).epsilon(1e-12));
  }
}

TEST_CASE("curvature agrees between the two spray paths") {
  std::mt19937_64 rng(29);
  const FinslerMetric metric = FinslerMetric::funk(-1);
  for (int n = 0; n < 10; ++n) {
    const Vec2 x = finsler::testing::random_base(rng, 0.7);
    const Vec2 y = finsler::testing::random_fiber(rng, 0.5, 1.5);
    const CurvatureTensor a = curvature_tensor(metric, x, y, SprayPath::Generic);
    const CurvatureTensor b = curvature_tensor(metric, x, y, SprayPath::Projective);
    for (int i = 0; i < 2; ++i)
      CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, b[i].cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("flag curvature of Funk is -1/4 everywhere") {
  std::mt19937_64 rng(31);
  for (int sign : {1, -1}) {
    const FinslerMetric metric = FinslerMetric::funk(sign);
    for (int n = 0; n < 25; ++n) {
      const Vec2 x = finsler::testing::random_base(rng, 0.8);
      const Vec2 y = finsler::testing::random_fiber(rng, 0.5, 1.5);
      const FlagCurvatureFit fit = flag_curvature_extract(metric, x, y);
      CHECK(std::abs(fit.lambda + 0.25) < 1e-6);
      CHECK(fit.residual < 1e-6 * std::max(1.0, y.squaredNorm()));
    }
  }
}

TEST_CASE("Euclidean flag curvature is zero") {
  const FlagCurvatureFit fit = flag_curvature_extract(FinslerMetric::euclidean(), Vec2(0.3, 0.3), Vec2(1.0, 2.0));
  CHECK(std::abs(fit.lambda) < 1e-14);
  CHECK(fit.residual < 1e-14);
}

TEST_CASE("spray error paths") {
  const FinslerMetric metric = FinslerMetric::funk(1);
  CHECK_THROWS_AS(spray_generic(metric, Vec2(0.0, 1.0), Vec2(1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(spray_generic(metric, Vec2(0.0, 0.0), Vec2(0.0, 0.0)), DomainError);
  CHECK_THROWS_AS(spray_jets(metric, JetPoint::seed(Vec2::Zero(), Vec2(1.0, 0.0), 3), SprayPath::Generic),
                  std::invalid_argument);
  const FinslerMetric norm_only = FinslerMetric::custom(
      "norm-only", [metric](const JetPoint& p) { return metric.norm(p); },
      [](const Vec2& b) { return b.norm() < 0.99; });
  CHECK_THROWS_AS(spray_projective(norm_only, Vec2::Zero(), Vec2(1.0, 0.0)), std::logic_error);
  // a degenerate "norm" F = |y1| has singular fundamental tensor
  const FinslerMetric degenerate = FinslerMetric::custom(
      "degenerate", [](const JetPoint& p) { return sqrt(p.y[0] * p.y[0]); }, [](const Vec2&) { return true; });
  CHECK_THROWS_AS(fundamental_tensor(degenerate, Vec2::Zero(), Vec2(1.0, 0.5)), GeometryError);
}

TEST_CASE("Funk spray at the origin") {
  const FinslerMetric funk = FinslerMetric::funk(1);
  const SprayData s = spray_projective(funk, Vec2::Zero(), Vec2(1.0, 0.0));
  CHECK(s.G[0] == doctest::Approx(0.5));
  CHECK(s.G[1] == doctest::Approx(0.0));
  CHECK(s.Gj(0, 0) == doctest::Approx(1.0));
  const SprayData g = spray_generic(funk, Vec2::Zero(), Vec2(1.0, 0.0));
  CHECK(g.G[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(g.Gj(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((fundamental_tensor(funk, Vec2::Zero(), Vec2(0.3, -0.7)) - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((fundamental_tensor(FinslerMetric::euclidean(), Vec2(0.5, 0.1), Vec2(2.0, 1.0)) - Mat2::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("fundamental tensor matches a finite-difference Hessian") {
  const FinslerMetric funk = FinslerMetric::funk(1);
  const Vec2 x(0.3, 0.0);
  const std::vector<double> y{0.0, 1.0};
  auto half_energy = [&](std::span<const double> v) {
    const double F = funk.norm(x, Vec2(v[0], v[1]));
    return 0.5 * F * F;
  };
  const Mat2 g = fundamental_tensor(funk, x, Vec2(y[0], y[1]));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      std::vector<int> idx{0, 0};
      ++idx[i];
      ++idx[j];
      const double fd = fd_check(half_energy, y, idx, 1e-4);
      CHECK(finsler::testing::rel_err(g(i, j), fd, g.cwiseAbs().maxCoeff()) <= 1e-5);
    }
}
