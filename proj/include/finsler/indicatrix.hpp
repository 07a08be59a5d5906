#pragma once

#include "finsler/circle_field.hpp"
#include "finsler/metric.hpp"
#include "finsler/spray.hpp"

#include <array>
#include <functional>
#include <optional>

namespace finsler {

/// The indicatrix at x0 parameterized by Euclidean angle:
/// y(t) = u(t) / F(x0, u(t)) with u(t) = (cos t, sin t).
class IndicatrixChart {
public:
  IndicatrixChart(FinslerMetric metric, const Vec2& x0);

  const FinslerMetric& metric() const { return metric_; }
  const Vec2& base() const { return x0_; }
  Vec2 fiber(double t) const;
  /// dy/dt, the d/dt basis vector.
  Vec2 tangent(double t) const;
  /// dF/dy at y(t), the conormal of the indicatrix.
  Vec2 conormal(double t) const;
  /// Euclidean angle of y in (-pi, pi].
  static double angle(const Vec2& y);
  /// r0 when F(x0, y) = |y| / r0 on a 64-point angle sample (relative tolerance).
  std::optional<double> euclidean_radius(double tolerance = 1e-12) const;

private:
  FinslerMetric metric_;
  Vec2 x0_;
};

/// A vertical vector field xi^i(x, y) d/dy^i evaluated on jets.
using FiberField = std::function<std::array<Jet, 2>(const JetPoint&)>;

/// xi^i = R^i_jk X^j Y^k for constant X, Y.
FiberField curvature_evaluator(const FinslerMetric& metric, const Vec2& X, const Vec2& Y, SprayPath path);

/// (nabla_k xi)^i = d xi^i/dx^k - G^m_k d xi^i/dy^m + G^i_km xi^m. The result
/// is again a FiberField, so derivatives nest.
FiberField berwald_derivative(const FinslerMetric& metric, FiberField xi, int k, SprayPath path);

/// Jet order a point must carry so that `depth` Berwald derivatives of the
/// curvature evaluator still have a value.
int required_jet_order(SprayPath path, int depth);

struct RestrictedField {
  CircleVectorField field;
  std::vector<double> samples;      // d/dt component on the grid
  double tangency_residual = 0.0;   // max |dF(xi)| on the grid
  bool aliasing_warning = false;
};

/// Evaluates xi on the indicatrix grid and writes xi = f dy/dt + h y; keeps f.
RestrictedField restrict_to_indicatrix(const IndicatrixChart& chart, const FiberField& xi, int jet_order,
                                       int grid = kDefaultGrid, int nmax = kDefaultNmax);

/// Tangency beyond this signals a pipeline bug.
inline constexpr double kTangencyTolerance = 1e-8;

/// R(X, Y) at x0 as a field in the angle coordinate. Throws GeometryError on non-tangency.
CircleVectorField curvature_field(const FinslerMetric& metric, const Vec2& x0, const Vec2& X, const Vec2& Y,
                                  int grid = kDefaultGrid, int nmax = kDefaultNmax);

/// nabla_k of `xi` at x0, restricted and projected. `depth` counts the
/// Berwald derivatives inside the result including this one.
CircleVectorField berwald_derivative_field(const FinslerMetric& metric, const FiberField& xi, int k,
                                           const Vec2& x0, int depth = 1, int grid = kDefaultGrid,
                                           int nmax = kDefaultNmax);

} // namespace finsler
