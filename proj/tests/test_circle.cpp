#include "finsler/circle_field.hpp"
#include "finsler/circle_map.hpp"
#include "finsler/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace finsler;

namespace {

constexpr double kPi = std::numbers::pi;

CircleVectorField random_field(std::mt19937_64& rng, int degree, int nmax, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  CircleVectorField f(nmax);
  f.a0() = u(rng);
  for (int n = 1; n <= degree; ++n) {
    f.a(n) = u(rng);
    f.b(n) = u(rng);
  }
  return f;
}

double coeff_gap(const CircleVectorField& f, const CircleVectorField& g) {
  return (f.coefficients() - g.coefficients()).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("field evaluation and layout") {
  CircleVectorField f(3);
  f.a0() = 2.0;
  f.a(1) = -1.0;
  f.b(3) = 0.5;
  CHECK(f(0.7) == doctest::Approx(2.0 - std::cos(0.7) + 0.5 * std::sin(2.1)));
  CHECK(f.derivative_at(0.7) == doctest::Approx(std::sin(0.7) + 1.5 * std::cos(2.1)));
  CHECK(f.derivative()(0.7) == doctest::Approx(f.derivative_at(0.7)));
  const Eigen::VectorXd c = f.coefficients();
  CHECK(c.size() == 7);
  CHECK(c[0] == 2.0);
  CHECK(c[1] == -1.0);
  CHECK(c[6] == 0.5);
  CHECK(coeff_gap(CircleVectorField::from_coefficients(c), f) == 0.0);
  CHECK(f.energy() == doctest::Approx(4.0 + 0.5 * (1.0 + 0.25)));
  CHECK(f.resized(5).nmax() == 5);
  CHECK(f.resized(5).b(3) == 0.5);
  CHECK(f.resized(2).nmax() == 2);
  CHECK(CircleVectorField::cos_mode(2, 3.0, 4)(0.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(CircleVectorField(-1), std::invalid_argument);
  CHECK_THROWS_AS(CircleVectorField::from_coefficients(Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST_CASE("Lie bracket examples") {
  const int nmax = 6;
  const auto one = CircleVectorField::constant(1.0, nmax);
  const auto c1 = CircleVectorField::cos_mode(1, 1.0, nmax), s1 = CircleVectorField::sin_mode(1, 1.0, nmax);
  CHECK(coeff_gap(lie_bracket(one, c1).field, s1) < 1e-15);
  CHECK(coeff_gap(lie_bracket(c1, s1).field, -one) < 1e-15);

  std::mt19937_64 rng(11);
  const auto f = random_field(rng, 4, nmax);
  CHECK(lie_bracket(f, f).field.max_coefficient() < 1e-14);

  // degree 4 x degree 4 overflows nmax = 6
  const auto g = random_field(rng, 4, nmax);
  const BracketResult r = lie_bracket(f, g);
  CHECK(r.truncation_loss > 0.0);
  const BracketResult wide = lie_bracket(f.resized(8), g.resized(8));
  CHECK(wide.truncation_loss < 1e-15);
  CHECK(coeff_gap(wide.field.resized(nmax), r.field) < 1e-13);

  // pointwise definition g f' - g' f
  for (double t : {0.1, 1.3, 4.0}) {
    const double want = g(t) * f.derivative_at(t) - g.derivative_at(t) * f(t);
    CHECK(wide.field(t) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("bracket antisymmetry and Jacobi") {
  std::mt19937_64 rng(2024);
  double anti = 0.0, jacobi = 0.0;
  for (int n = 0; n < 100; ++n) {
    const auto f = random_field(rng, 4, 12), g = random_field(rng, 4, 12), h = random_field(rng, 4, 12);
    anti = std::max(anti, (lie_bracket(f, g).field + lie_bracket(g, f).field).max_coefficient());
    const auto j = lie_bracket(f, lie_bracket(g, h).field).field + lie_bracket(g, lie_bracket(h, f).field).field +
                   lie_bracket(h, lie_bracket(f, g).field).field;
    jacobi = std::max(jacobi, j.sup_norm());
  }
  CHECK(anti < 1e-14);
  CHECK(jacobi <= 1e-10);
}

TEST_CASE("Fourier decomposition") {
  std::vector<double> s(64);
  for (int i = 0; i < 64; ++i) s[i] = std::cos(3.0 * 2.0 * kPi * i / 64);
  FourierResult r = fourier_decompose(s, 8);
  CHECK(r.field.a(3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((r.field - CircleVectorField::cos_mode(3, 1.0, 8)).max_coefficient() <= 1e-12);
  CHECK_FALSE(r.aliasing_warning);

  for (int i = 0; i < 64; ++i) s[i] = 2.0 + std::sin(2.0 * kPi * i / 64);
  r = fourier_decompose(s, 8);
  CHECK(r.field.a0() == doctest::Approx(2.0));
  CHECK(r.field.b(1) == doctest::Approx(1.0));

  SUBCASE("Parseval") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k) {
      const auto f = random_field(rng, 8, 8);
      const std::vector<double> v = f.sample(64);
      double mean_square = 0.0;
      for (double x : v) mean_square += x * x / 64.0;
      const FourierResult d = fourier_decompose(v, 8);
      CHECK(std::abs(d.field.energy() - mean_square) <= 1e-10);
      CHECK(coeff_gap(d.field, f) < 1e-12);
    }
  }
  SUBCASE("aliasing warning") {
    for (int i = 0; i < 64; ++i) s[i] = std::sin(8.0 * 2.0 * kPi * i / 64);
    CHECK(fourier_decompose(s, 8).aliasing_warning);
  }
  CHECK_THROWS_AS(fourier_decompose(std::vector<double>(16, 0.0), 8), std::invalid_argument);
}

TEST_CASE("bracket closure") {
  const ClosureResult abelian = bracket_closure({CircleVectorField::constant(1.0, 5)}, 5, 4);
  CHECK(abelian.final_dimension == 1);
  CHECK(abelian.stabilized);

  for (int nmax : {3, 5, 8}) {
    const ClosureResult r = bracket_closure(fourier_generators(nmax), nmax, 8);
    CHECK(r.final_dimension == 2 * nmax + 1);
    CHECK(r.depth_used <= 8);
    CHECK(r.dimension_trace.front() == 5);
  }
  // sl(2) is closed: {1, cos t, sin t} stays three-dimensional
  const ClosureResult sl2 = bracket_closure(
      {CircleVectorField::constant(1.0, 6), CircleVectorField::cos_mode(1, 1.0, 6), CircleVectorField::sin_mode(1, 1.0, 6)},
      6, 8);
  CHECK(sl2.final_dimension == 3);
  CHECK_THROWS_AS(fourier_generators(1), std::invalid_argument);
}

TEST_CASE("circle maps") {
  const int n = 64;
  std::vector<double> lift(n);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    lift[i] = t + 0.3 + 0.2 * std::sin(t);
  }
  const CircleMap phi(lift);
  CHECK(distance(compose(CircleMap::identity(n), phi), phi) == 0.0);
  CHECK(distance(compose(CircleMap::rotation(n, 0.4), CircleMap::rotation(n, 1.1)), CircleMap::rotation(n, 1.5)) <
        1e-12);
  CHECK(phi(1.0) == doctest::Approx(1.3 + 0.2 * std::sin(1.0)).epsilon(1e-13));
  CHECK(phi(1.0 + 2.0 * kPi) == doctest::Approx(phi(1.0) + 2.0 * kPi));
  CHECK(distance(phi.resampled(128).resampled(64), phi) < 1e-12);
  CHECK(phi.min_increment() > 0.0);

  std::vector<double> bad = lift;
  bad[10] = bad[9] - 0.01;
  CHECK_THROWS_AS(CircleMap{bad}, SolverError);
}

TEST_CASE("flows") {
  const SolverSettings tight = flow_solver_settings();
  CHECK(distance(exp_flow(CircleVectorField(4), 1.0, 32, tight), CircleMap::identity(32)) == 0.0);
  CHECK(distance(exp_flow(CircleVectorField::constant(0.7, 4), 2.0, 32, tight), CircleMap::rotation(32, 1.4)) <
        1e-12);

  SUBCASE("sin t closed form") {
    const int n = 128;
    const CircleMap phi = exp_flow(CircleVectorField::sin_mode(1, 1.0, 4), 1.0, n, tight);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t0 = phi.grid_point(i);
      // theta stays in the same half-turn as theta0, fixed points at 0 and pi
      double want = 2.0 * std::atan(std::exp(1.0) * std::tan(t0 / 2.0));
      if (t0 > kPi) want += 2.0 * kPi;
      if (i == n / 2) want = kPi;
      worst = std::max(worst, std::abs(phi.lift()[i] - want));
    }
    CHECK(worst <= 1e-8);
  }
  SUBCASE("group property and inverse") {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 3; ++k) {
      const auto f = random_field(rng, 3, 4, 0.2);
      const double s = 0.8;
      const CircleMap full = exp_flow(f, s, 128, tight);
      const CircleMap half = exp_flow(f, s / 2, 128, tight);
      CHECK(distance(full, compose(half, half)) <= 1e-8);
      CHECK(distance(compose(exp_flow(f, -s, 128, tight), full), CircleMap::identity(128)) <= 1e-8);
    }
  }
  CHECK_THROWS_AS(exp_flow(CircleVectorField(2), 1.0, 8), std::invalid_argument);
}
