#include "finsler/spray.hpp"

#include "finsler/errors.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace finsler {

namespace {

double kron(int a, int b) { return a == b ? 1.0 : 0.0; }

SprayJets projective_jets(const FinslerMetric& metric, const JetPoint& p) {
  if (!metric.has_projective_factor())
    throw std::logic_error(metric.name() + ": projective spray needs a closed-form projective factor");
  const Jet P = metric.projective_factor(p);
  std::array<Jet, 2> dP{P.derivative(fiber_var(0)), P.derivative(fiber_var(1))};
  Tensor2<Jet> ddP;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) ddP[k][l] = dP[k].derivative(fiber_var(l));

  SprayJets s;
  for (int i = 0; i < 2; ++i) {
    s.G[i] = P * p.y[i];
    for (int k = 0; k < 2; ++k) {
      s.Gj[i][k] = dP[k] * p.y[i] + P * kron(i, k);
      for (int l = 0; l < 2; ++l)
        s.Gjk[i][k][l] = ddP[k][l] * p.y[i] + dP[k] * kron(i, l) + dP[l] * kron(i, k);
    }
  }
  return s;
}

Tensor2<Jet> invert(const Tensor2<Jet>& g, const std::string& who) {
  const Jet det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  if (!(std::abs(det.value()) > kDeterminantGuard))
    throw GeometryError(who + ": singular fundamental tensor");
  const Jet inv_det = reciprocal(det);
  Tensor2<Jet> inv;
  inv[0][0] = g[1][1] * inv_det;
  inv[1][1] = g[0][0] * inv_det;
  inv[0][1] = -g[0][1] * inv_det;
  inv[1][0] = -g[1][0] * inv_det;
  return inv;
}

SprayJets generic_jets(const FinslerMetric& metric, const JetPoint& p) {
  const Tensor2<Jet> g = fundamental_tensor_jets(metric, p);
  const Tensor2<Jet> ginv = invert(g, metric.name());
  // dg[j][l][k] = d g_jl / dx^k
  Tensor3<Jet> dg;
  for (int j = 0; j < 2; ++j)
    for (int l = 0; l < 2; ++l)
      for (int k = 0; k < 2; ++k) dg[j][l][k] = g[j][l].derivative(base_var(k));

  // Christoffel-type contraction: T_l = (2 dg_jl/dx^k - dg_jk/dx^l) y^j y^k
  std::array<Jet, 2> contraction;
  for (int l = 0; l < 2; ++l) {
    Jet sum(0.0);
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) sum += (2.0 * dg[j][l][k] - dg[j][k][l]) * (p.y[j] * p.y[k]);
    contraction[l] = sum;
  }

  SprayJets s;
  for (int i = 0; i < 2; ++i) s.G[i] = 0.25 * (ginv[i][0] * contraction[0] + ginv[i][1] * contraction[1]);
  // lower-order callers (geodesic, connection) leave the deeper tensors unset
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (s.G[i].order() == 0) continue;
      s.Gj[i][j] = s.G[i].derivative(fiber_var(j));
      for (int k = 0; k < 2; ++k)
        if (s.Gj[i][j].order() > 0) s.Gjk[i][j][k] = s.Gj[i][j].derivative(fiber_var(k));
    }
  return s;
}

void require_order(const JetPoint& p, int needed, const char* what) {
  if (p.y[0].order() < needed)
    throw std::invalid_argument(std::string(what) + ": jet order " + std::to_string(needed) +
                                " required, got " + std::to_string(p.y[0].order()));
}

SprayData values(const SprayJets& s) {
  SprayData d;
  for (int i = 0; i < 2; ++i) {
    d.G[i] = s.G[i].value();
    for (int j = 0; j < 2; ++j) {
      d.Gj(i, j) = s.Gj[i][j].value();
      for (int k = 0; k < 2; ++k) d.Gjk[i](j, k) = s.Gjk[i][j][k].value();
    }
  }
  return d;
}

} // namespace

OrderLoss order_loss(SprayPath path) {
  if (path == SprayPath::Projective) return {0, 1, 2, 2};
  return {3, 4, 5, 5};
}

SprayPath preferred_path(const FinslerMetric& metric) {
  return metric.has_projective_factor() ? SprayPath::Projective : SprayPath::Generic;
}

Tensor2<Jet> fundamental_tensor_jets(const FinslerMetric& metric, const JetPoint& p) {
  require_order(p, 2, "fundamental tensor");
  const Jet F = metric.norm(p);
  const Jet energy = 0.5 * F * F;
  Tensor2<Jet> g;
  for (int i = 0; i < 2; ++i) {
    const Jet di = energy.derivative(fiber_var(i));
    for (int j = 0; j < 2; ++j) g[i][j] = di.derivative(fiber_var(j));
  }
  return g;
}

SprayJets spray_jets(const FinslerMetric& metric, const JetPoint& p, SprayPath path) {
  require_order(p, order_loss(path).Gjk, "spray");
  return path == SprayPath::Projective ? projective_jets(metric, p) : generic_jets(metric, p);
}

Tensor3<Jet> curvature_jets(const SprayJets& s) {
  Tensor3<Jet> R;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        Jet r = s.Gj[i][j].derivative(base_var(k)) - s.Gj[i][k].derivative(base_var(j));
        for (int m = 0; m < 2; ++m) r += s.Gj[m][j] * s.Gjk[i][k][m] - s.Gj[m][k] * s.Gjk[i][j][m];
        R[i][j][k] = r;
      }
  return R;
}

Mat2 fundamental_tensor(const FinslerMetric& metric, const Vec2& x, const Vec2& y) {
  const Tensor2<Jet> gj = fundamental_tensor_jets(metric, JetPoint::seed(x, y, 2, Seeding::FiberOnly));
  Mat2 g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = gj[i][j].value();
  const double det = g.determinant();
  if (!(g(0, 0) > 0.0 && det > kDeterminantGuard))
    throw GeometryError(metric.name() + ": fundamental tensor is not positive definite");
  return g;
}

SprayData spray_generic(const FinslerMetric& metric, const Vec2& x, const Vec2& y) {
  return values(generic_jets(metric, JetPoint::seed(x, y, order_loss(SprayPath::Generic).Gjk)));
}

SprayData spray_projective(const FinslerMetric& metric, const Vec2& x, const Vec2& y) {
  return values(projective_jets(
      metric, JetPoint::seed(x, y, order_loss(SprayPath::Projective).Gjk, Seeding::FiberOnly)));
}

Vec2 geodesic_coefficients(const FinslerMetric& metric, const Vec2& x, const Vec2& y) {
  if (metric.has_projective_factor()) return metric.projective_factor(x, y) * y;
  const SprayJets s = generic_jets(metric, JetPoint::seed(x, y, order_loss(SprayPath::Generic).G));
  return {s.G[0].value(), s.G[1].value()};
}

Mat2 nonlinear_connection(const FinslerMetric& metric, const Vec2& x, const Vec2& y) {
  Mat2 gj;
  if (metric.has_projective_factor()) {
    const JetPoint p = JetPoint::seed(x, y, 1, Seeding::FiberOnly);
    const Jet P = metric.projective_factor(p);
    const double dP[2] = {P.derivative(fiber_var(0)).value(), P.derivative(fiber_var(1)).value()};
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) gj(i, k) = dP[k] * y[i] + P.value() * kron(i, k);
    return gj;
  }
  const SprayJets s = generic_jets(metric, JetPoint::seed(x, y, order_loss(SprayPath::Generic).Gj));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gj(i, j) = s.Gj[i][j].value();
  return gj;
}

CurvatureTensor curvature_tensor(const FinslerMetric& metric, const Vec2& x, const Vec2& y,
                                 SprayPath path) {
  const JetPoint p = JetPoint::seed(x, y, order_loss(path).R);
  const Tensor3<Jet> R = curvature_jets(spray_jets(metric, p, path));
  CurvatureTensor out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out[i](j, k) = R[i][j][k].value();
  return out;
}

CurvatureTensor constant_curvature_tensor(double lambda, const Mat2& g, const Vec2& y) {
  const Vec2 gy = g * y;
  CurvatureTensor out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out[i](j, k) = lambda * (kron(i, k) * gy[j] - kron(i, j) * gy[k]);
  return out;
}

FlagCurvatureFit flag_curvature_extract(const FinslerMetric& metric, const Vec2& x, const Vec2& y,
                                        SprayPath path) {
  const CurvatureTensor R = curvature_tensor(metric, x, y, path);
  const CurvatureTensor B = constant_curvature_tensor(1.0, fundamental_tensor(metric, x, y), y);
  double rb = 0.0, bb = 0.0;
  for (int i = 0; i < 2; ++i) {
    rb += (R[i].array() * B[i].array()).sum();
    bb += B[i].squaredNorm();
  }
  if (bb == 0.0) throw GeometryError("flag curvature fit: model tensor vanishes");
  const double lambda = rb / bb;
  double residual = 0.0;
  for (int i = 0; i < 2; ++i) residual = std::max(residual, (R[i] - lambda * B[i]).cwiseAbs().maxCoeff());
  return {lambda, residual};
}

} // namespace finsler
