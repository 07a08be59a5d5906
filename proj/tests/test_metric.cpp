#include "finsler/errors.hpp"
#include "finsler/metric.hpp"
#include "finsler/spray.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace finsler;
using finsler::testing::rel_err;

TEST_CASE("Funk norm at reference points") {
  CHECK(funk_norm(1, Vec2(0.5, 0.0), Vec2(1.0, 0.0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(funk_norm(-1, Vec2(0.5, 0.0), Vec2(1.0, 0.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(funk_norm(1, Vec2(0.0, 0.0), Vec2(3.0, 4.0)) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("Funk projective factor at reference points") {
  CHECK(funk_projective_factor(1, Vec2(0.0, 0.0), Vec2(1.0, 0.0)) == doctest::Approx(0.5));
  CHECK(funk_projective_factor(-1, Vec2(0.0, 0.0), Vec2(1.0, 0.0)) == doctest::Approx(-0.5));
  CHECK(funk_projective_factor(1, Vec2(0.5, 0.0), Vec2(1.0, 0.0)) == doctest::Approx(1.0));
  CHECK(funk_projective_factor(-1, Vec2(0.5, 0.0), Vec2(1.0, 0.0)) == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("Funk+ projective factor equals half the norm") {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 100; ++n) {
    const Vec2 x = finsler::testing::random_base(rng, 0.9);
    const Vec2 y = finsler::testing::random_fiber(rng, 0.1, 3.0);
    CHECK(rel_err(funk_projective_factor(1, x, y), 0.5 * funk_norm(1, x, y)) < 1e-13);
    CHECK(rel_err(funk_projective_factor(-1, x, y), -0.5 * funk_norm(-1, x, y)) < 1e-13);
  }
}

TEST_CASE("metric object agrees with the free functions") {
  const FinslerMetric plus = FinslerMetric::funk(1), minus = FinslerMetric::funk(-1);
  const Vec2 x(0.2, -0.4), y(-0.3, 0.8);
  CHECK(plus.norm(x, y) == doctest::Approx(funk_norm(1, x, y)).epsilon(1e-15));
  CHECK(minus.norm(x, y) == doctest::Approx(funk_norm(-1, x, y)).epsilon(1e-15));
  CHECK(plus.projective_factor(x, y) == doctest::Approx(funk_projective_factor(1, x, y)).epsilon(1e-15));
  CHECK(plus.curvature().value() == -0.25);
  CHECK(FinslerMetric::euclidean().norm(x, y) == doctest::Approx(y.norm()));
}

TEST_CASE("positive homogeneity of degree one") {
  std::mt19937_64 rng(11);
  for (const auto& metric : {FinslerMetric::funk(1), FinslerMetric::funk(-1), FinslerMetric::euclidean()}) {
    for (int n = 0; n < 50; ++n) {
      const Vec2 x = finsler::testing::random_base(rng, 0.9);
      const Vec2 y = finsler::testing::random_fiber(rng, 0.1, 3.0);
      const double lambda = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
      CHECK(rel_err(metric.norm(x, lambda * y), lambda * metric.norm(x, y)) < 1e-13);
    }
  }
}

TEST_CASE("Funk norm is positive in the disk") {
  std::mt19937_64 rng(13);
  for (int n = 0; n < 200; ++n) {
    const Vec2 x = finsler::testing::random_base(rng, 0.99);
    const Vec2 y = finsler::testing::random_fiber(rng, 0.1, 3.0);
    CHECK(funk_norm(1, x, y) > 0.0);
    CHECK(funk_norm(-1, x, y) > 0.0);
  }
}

TEST_CASE("projective factor from the norm matches the closed form") {
  std::mt19937_64 rng(17);
  for (int sign : {1, -1}) {
    const FinslerMetric metric = FinslerMetric::funk(sign);
    for (int n = 0; n < 100; ++n) {
      const Vec2 x = finsler::testing::random_base(rng, 0.8);
      const Vec2 y = finsler::testing::random_fiber(rng, 0.2, 2.0);
      CHECK(rel_err(projective_factor_from_norm(metric, x, y), funk_projective_factor(sign, x, y)) < 1e-8);
    }
  }
}

TEST_CASE("fundamental tensor of Funk at the origin is the identity") {
  for (int sign : {1, -1}) {
    const Mat2 g = fundamental_tensor(FinslerMetric::funk(sign), Vec2::Zero(), Vec2(0.6, 0.8));
    CHECK((g - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("fundamental tensor contracts to the squared norm") {
  std::mt19937_64 rng(19);
  const FinslerMetric metric = FinslerMetric::funk(1);
  for (int n = 0; n < 50; ++n) {
    const Vec2 x = finsler::testing::random_base(rng, 0.8);
    const Vec2 y = finsler::testing::random_fiber(rng, 0.2, 2.0);
    const Mat2 g = fundamental_tensor(metric, x, y);
    const double F = metric.norm(x, y);
    CHECK(rel_err(y.dot(g * y), F * F) < 1e-12);
    CHECK(std::abs(g(0, 1) - g(1, 0)) < 1e-14);
  }
}

TEST_CASE("Bryant-Shen origin data") {
  const double alpha = 0.3;
  const auto [F, P] = bryant_shen_origin(alpha, Vec2(3.0, 4.0));
  CHECK(F == doctest::Approx(5.0 * std::cos(alpha)).epsilon(1e-15));
  CHECK(P == doctest::Approx(5.0 * std::sin(alpha)).epsilon(1e-15));
  CHECK(P / F == doctest::Approx(std::tan(alpha)).epsilon(1e-15));

  const FinslerMetric metric = FinslerMetric::bryant_shen(alpha);
  CHECK(metric.norm(Vec2::Zero(), Vec2(3.0, 4.0)) == doctest::Approx(F));
  CHECK(metric.projective_factor(Vec2::Zero(), Vec2(3.0, 4.0)) == doctest::Approx(P));
  CHECK(metric.curvature().value() == 1.0);
}

TEST_CASE("Bryant-Shen refuses points away from the origin") {
  const FinslerMetric metric = FinslerMetric::bryant_shen(0.3);
  CHECK_THROWS_AS(metric.norm(Vec2(0.1, 0.0), Vec2(1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(metric.norm(JetPoint::seed(Vec2::Zero(), Vec2(1.0, 0.0), 2)), DomainError);
  CHECK_THROWS_AS(projective_factor_from_norm(metric, Vec2::Zero(), Vec2(1.0, 0.0)), DomainError);
  CHECK_NOTHROW(metric.norm(JetPoint::seed(Vec2::Zero(), Vec2(1.0, 0.0), 2, Seeding::FiberOnly)));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(funk_norm(1, Vec2(1.0, 0.0), Vec2(1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(funk_norm(1, Vec2(0.0, 0.0), Vec2(0.0, 0.0)), DomainError);
  CHECK_THROWS_AS(funk_norm(2, Vec2(0.0, 0.0), Vec2(1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(FinslerMetric::funk(1).norm(Vec2(0.6, 0.8), Vec2(1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(FinslerMetric::bryant_shen(std::numbers::pi / 2), DomainError);
  CHECK_THROWS_AS(bryant_shen_origin(0.3, Vec2::Zero()), DomainError);
  CHECK_THROWS_AS(FinslerMetric::euclidean().norm(Vec2(5.0, 5.0), Vec2::Zero()), DomainError);
}

TEST_CASE("metric spec parsing") {
  CHECK(FinslerMetric::parse("funk:+").kind() == MetricKind::FunkPlus);
  CHECK(FinslerMetric::parse("funk:-").kind() == MetricKind::FunkMinus);
  CHECK(FinslerMetric::parse("euclid").kind() == MetricKind::Euclidean);
  const FinslerMetric bs = FinslerMetric::parse("bryant:0.25");
  CHECK(bs.kind() == MetricKind::BryantShen);
  CHECK(bs.alpha() == 0.25);
  CHECK_THROWS_AS(FinslerMetric::parse("bryant:"), std::invalid_argument);
  CHECK_THROWS_AS(FinslerMetric::parse("bryant:0.2x"), std::invalid_argument);
  CHECK_THROWS_AS(FinslerMetric::parse("hilbert"), std::invalid_argument);
  CHECK_THROWS_AS(FinslerMetric::parse("bryant:2.0"), DomainError);
}

TEST_CASE("reference values from the catalog") {
  CHECK(funk_norm(1, Vec2::Zero(), Vec2(1.0, 0.0)) == 1.0);
  CHECK(funk_projective_factor(-1, Vec2::Zero(), Vec2(0.0, 2.0)) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(projective_factor_from_norm(FinslerMetric::euclidean(), Vec2(0.4, -2.0), Vec2(1.0, 3.0)) == 0.0);
  CHECK(projective_factor_from_norm(FinslerMetric::funk(1), Vec2::Zero(), Vec2(1.0, 0.0)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rel_err(projective_factor_from_norm(FinslerMetric::funk(1), Vec2(0.2, 0.1), Vec2(0.5, 1.0)),
                funk_projective_factor(1, Vec2(0.2, 0.1), Vec2(0.5, 1.0))) < 1e-8);

  const auto [f0, p0] = bryant_shen_origin(0.0, Vec2(1.0, 0.0));
  CHECK(f0 == 1.0);
  CHECK(p0 == 0.0);
  const auto [f1, p1] = bryant_shen_origin(std::numbers::pi / 4, Vec2(1.0, 0.0));
  CHECK(f1 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(p1 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  const auto [f2, p2] = bryant_shen_origin(std::numbers::pi / 6, Vec2(0.0, 2.0));
  CHECK(f2 == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(p2 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("projective factor is positively 1-homogeneous") {
  std::mt19937_64 rng(37);
  for (int n = 0; n < 100; ++n) {
    const Vec2 x = finsler::testing::random_base(rng, 0.9);
    const Vec2 y = finsler::testing::random_fiber(rng, 0.1, 3.0);
    const double s = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
    for (int sign : {1, -1})
      CHECK(std::abs(funk_projective_factor(sign, x, s * y) - s * funk_projective_factor(sign, x, y)) <=
            1e-12 * s * funk_norm(sign, x, y));
  }
}
