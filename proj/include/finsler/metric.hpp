#pragma once

#include "finsler/jet.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace finsler {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Jet variable slots for a point (x, y) of the tangent bundle.
inline constexpr int base_var(int i) { return i; }
inline constexpr int fiber_var(int i) { return 2 + i; }

enum class Seeding { All, BaseOnly, FiberOnly };

/// A point of TM lifted to jets. Unseeded coordinates are constants.
struct JetPoint {
  std::array<Jet, 2> x;
  std::array<Jet, 2> y;

  static JetPoint seed(const Vec2& x, const Vec2& y, int order, Seeding seeding = Seeding::All);

  Vec2 base() const { return {x[0].value(), x[1].value()}; }
  Vec2 fiber() const { return {y[0].value(), y[1].value()}; }
};

enum class MetricKind { FunkPlus, FunkMinus, BryantShen, Euclidean, Custom };

/// A Finsler norm on a chart of R^2, optionally with a closed-form projective
/// factor and a known constant flag curvature. Immutable after construction.
class FinslerMetric {
public:
  using Evaluator = std::function<Jet(const JetPoint&)>;
  using DomainPredicate = std::function<bool(const Vec2&)>;

  /// Funk disk; sign = +1 or -1 picks the branch of the <x,y> term.
  static FinslerMetric funk(int sign);
  static FinslerMetric euclidean();
  /// Bryant-Shen sphere data at the chart origin only; |alpha| < pi/2.
  static FinslerMetric bryant_shen(double alpha);
  /// Norm-only metric (no closed-form projective factor unless given).
  static FinslerMetric custom(std::string name, Evaluator norm, DomainPredicate domain,
                              std::optional<Evaluator> projective = std::nullopt,
                              std::optional<double> curvature = std::nullopt);

  /// `funk:+`, `funk:-`, `bryant:<alpha-radians>`, `euclid`.
  static FinslerMetric parse(std::string_view spec);

  MetricKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::optional<double> curvature() const { return curvature_; }
  bool has_projective_factor() const { return static_cast<bool>(projective_); }
  double alpha() const { return alpha_; }

  bool in_domain(const Vec2& x) const { return domain_(x); }

  Jet norm(const JetPoint& p) const;
  Jet projective_factor(const JetPoint& p) const;
  double norm(const Vec2& x, const Vec2& y) const;
  double projective_factor(const Vec2& x, const Vec2& y) const;

private:
  FinslerMetric() = default;
  void check_point(const JetPoint& p) const;

  MetricKind kind_ = MetricKind::Custom;
  std::string name_;
  Evaluator norm_;
  std::optional<Evaluator> projective_;
  DomainPredicate domain_;
  std::optional<double> curvature_;
  double alpha_ = 0.0;
};

/// (sqrt(|y|^2 - (|x|^2|y|^2 - <x,y>^2)) + sign <x,y>) / (1 - |x|^2).
double funk_norm(int sign, const Vec2& x, const Vec2& y);
/// (sign sqrt(...) + <x,y>) / (2 (1 - |x|^2)).
double funk_projective_factor(int sign, const Vec2& x, const Vec2& y);
/// (F(0, y), P(0, y)) = (|y| cos alpha, |y| sin alpha).
std::pair<double, double> bryant_shen_origin(double alpha, const Vec2& y);
/// P = (1 / 2F) dF/dx^i y^i, from base derivatives of the norm.
double projective_factor_from_norm(const FinslerMetric& metric, const Vec2& x, const Vec2& y);

/// Funk domain guard: |x| < 1 - 1e-9.
inline constexpr double kFunkBoundaryMargin = 1e-9;

} // namespace finsler
