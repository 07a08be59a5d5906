#pragma once

#include "finsler/jet.hpp"
#include "finsler/metric.hpp"

#include <array>

namespace finsler {

/// Generic: geodesic coefficients from the fundamental tensor of F.
/// Projective: G^i = P y^i from the closed-form projective factor.
enum class SprayPath { Generic, Projective };

template <class T>
using Vector2 = std::array<T, 2>;
template <class T>
using Tensor2 = std::array<std::array<T, 2>, 2>;
template <class T>
using Tensor3 = std::array<Tensor2<T>, 2>;

/// Jet orders consumed on the way from the seeded point to each quantity.
struct OrderLoss {
  int G, Gj, Gjk, R;
};
OrderLoss order_loss(SprayPath path);

struct SprayJets {
  Vector2<Jet> G;    // G^i
  Tensor2<Jet> Gj;   // Gj[i][j] = G^i_j
  Tensor3<Jet> Gjk;  // Gjk[i][j][k] = G^i_jk
};

/// g_ij = 1/2 d^2 F^2 / dy^i dy^j as jets of order K - 2.
Tensor2<Jet> fundamental_tensor_jets(const FinslerMetric& metric, const JetPoint& p);
SprayJets spray_jets(const FinslerMetric& metric, const JetPoint& p, SprayPath path);
/// R[i][j][k] = R^i_jk.
Tensor3<Jet> curvature_jets(const SprayJets& spray);

/// Picks Projective when the metric has a closed-form P.
SprayPath preferred_path(const FinslerMetric& metric);

struct SprayData {
  Vec2 G;                  // G^i
  Mat2 Gj;                 // Gj(i, j) = G^i_j
  std::array<Mat2, 2> Gjk; // Gjk[i](j, k) = G^i_jk
};

using CurvatureTensor = std::array<Mat2, 2>;  // R[i](j, k) = R^i_jk

/// Symmetric positive definite; throws GeometryError otherwise.
Mat2 fundamental_tensor(const FinslerMetric& metric, const Vec2& x, const Vec2& y);

SprayData spray_generic(const FinslerMetric& metric, const Vec2& x, const Vec2& y);
SprayData spray_projective(const FinslerMetric& metric, const Vec2& x, const Vec2& y);

/// G^i(x, y) only, for the geodesic equation.
Vec2 geodesic_coefficients(const FinslerMetric& metric, const Vec2& x, const Vec2& y);
/// G^i_j(x, y) only, for the parallel transport equation.
Mat2 nonlinear_connection(const FinslerMetric& metric, const Vec2& x, const Vec2& y);

CurvatureTensor curvature_tensor(const FinslerMetric& metric, const Vec2& x, const Vec2& y,
                                 SprayPath path = SprayPath::Generic);

/// lambda (delta^i_k g_jm y^m - delta^i_j g_km y^m).
CurvatureTensor constant_curvature_tensor(double lambda, const Mat2& g, const Vec2& y);

struct FlagCurvatureFit {
  double lambda;    // least-squares fit over all eight components
  double residual;  // max componentwise deviation after the fit
};

FlagCurvatureFit flag_curvature_extract(const FinslerMetric& metric, const Vec2& x, const Vec2& y,
                                        SprayPath path = SprayPath::Generic);

/// Closed-form 2x2 inverse; |det| must exceed this.
inline constexpr double kDeterminantGuard = 1e-14;

} // namespace finsler
