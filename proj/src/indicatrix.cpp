#include "finsler/indicatrix.hpp"

#include "finsler/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace finsler {

namespace {

Vec2 unit(double t) { return {std::cos(t), std::sin(t)}; }

// F and dF/dy at (x0, y).
std::pair<double, Vec2> norm_and_gradient(const FinslerMetric& metric, const Vec2& x0, const Vec2& y) {
  const Jet F = metric.norm(JetPoint::seed(x0, y, 1, Seeding::FiberOnly));
  return {F.value(), Vec2(F.derivative(fiber_var(0)).value(), F.derivative(fiber_var(1)).value())};
}

} // namespace

IndicatrixChart::IndicatrixChart(FinslerMetric metric, const Vec2& x0) : metric_(std::move(metric)), x0_(x0) {
  if (!metric_.in_domain(x0)) throw DomainError(metric_.name() + ": indicatrix base point outside the domain");
}

Vec2 IndicatrixChart::fiber(double t) const {
  const Vec2 u = unit(t);
  return u / metric_.norm(x0_, u);
}

Vec2 IndicatrixChart::tangent(double t) const {
  const Vec2 u = unit(t), du(-std::sin(t), std::cos(t));
  const auto [F, dF] = norm_and_gradient(metric_, x0_, u);
  return du / F - u * dF.dot(du) / (F * F);
}

Vec2 IndicatrixChart::conormal(double t) const { return norm_and_gradient(metric_, x0_, fiber(t)).second; }

double IndicatrixChart::angle(const Vec2& y) { return std::atan2(y[1], y[0]); }

std::optional<double> IndicatrixChart::euclidean_radius(double tolerance) const {
  constexpr int kSamples = 64;
  const double F0 = metric_.norm(x0_, unit(0.0));
  for (int i = 1; i < kSamples; ++i)
    if (std::abs(metric_.norm(x0_, unit(2.0 * std::numbers::pi * i / kSamples)) - F0) > tolerance * F0)
      return std::nullopt;
  return 1.0 / F0;
}

FiberField curvature_evaluator(const FinslerMetric& metric, const Vec2& X, const Vec2& Y, SprayPath path) {
  return [metric, X, Y, path](const JetPoint& p) {
    const Tensor3<Jet> R = curvature_jets(spray_jets(metric, p, path));
    std::array<Jet, 2> xi;
    for (int i = 0; i < 2; ++i) {
      Jet sum(0.0);
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          if (X[j] * Y[k] != 0.0) sum += R[i][j][k] * (X[j] * Y[k]);
      xi[i] = sum;
    }
    return xi;
  };
}

FiberField berwald_derivative(const FinslerMetric& metric, FiberField xi, int k, SprayPath path) {
  if (k != 0 && k != 1) throw std::invalid_argument("Berwald derivative direction must be 0 or 1");
  return [metric, xi = std::move(xi), k, path](const JetPoint& p) {
    const std::array<Jet, 2> v = xi(p);
    const SprayJets s = spray_jets(metric, p, path);
    std::array<Jet, 2> out;
    for (int i = 0; i < 2; ++i) {
      Jet r = v[i].derivative(base_var(k));
      for (int m = 0; m < 2; ++m) r += s.Gjk[i][k][m] * v[m] - s.Gj[m][k] * v[i].derivative(fiber_var(m));
      out[i] = r;
    }
    return out;
  };
}

int required_jet_order(SprayPath path, int depth) {
  if (depth < 0) throw std::invalid_argument("derivative depth must be >= 0");
  // each level needs the spray's G^i_jk at that level
  return order_loss(path).R + depth;
}

RestrictedField restrict_to_indicatrix(const IndicatrixChart& chart, const FiberField& xi, int jet_order, int grid,
                                       int nmax) {
  if (grid <= 2 * nmax) throw std::invalid_argument("indicatrix grid too coarse for the Fourier truncation");
  RestrictedField out;
  out.samples.resize(grid);
  for (int i = 0; i < grid; ++i) {
    const double t = 2.0 * std::numbers::pi * i / grid;
    const Vec2 y = chart.fiber(t);
    const std::array<Jet, 2> v = xi(JetPoint::seed(chart.base(), y, jet_order));
    const Vec2 value(v[0].value(), v[1].value());
    Mat2 frame;
    frame.col(0) = chart.tangent(t);
    frame.col(1) = y;
    const Vec2 fh = frame.partialPivLu().solve(value);
    out.samples[i] = fh[0];
    out.tangency_residual = std::max(out.tangency_residual, std::abs(chart.conormal(t).dot(value)));
  }
  FourierResult fr = fourier_decompose(out.samples, nmax);
  out.field = std::move(fr.field);
  out.aliasing_warning = fr.aliasing_warning;
  return out;
}

CircleVectorField curvature_field(const FinslerMetric& metric, const Vec2& x0, const Vec2& X, const Vec2& Y,
                                  int grid, int nmax) {
  const SprayPath path = preferred_path(metric);
  const IndicatrixChart chart(metric, x0);
  RestrictedField r = restrict_to_indicatrix(chart, curvature_evaluator(metric, X, Y, path),
                                             required_jet_order(path, 0), grid, nmax);
  if (r.tangency_residual > kTangencyTolerance)
    throw GeometryError(metric.name() + ": curvature field is not tangent to the indicatrix (residual " +
                        std::to_string(r.tangency_residual) + ")");
  return r.field;
}

CircleVectorField berwald_derivative_field(const FinslerMetric& metric, const FiberField& xi, int k,
                                           const Vec2& x0, int depth, int grid, int nmax) {
  const SprayPath path = preferred_path(metric);
  const IndicatrixChart chart(metric, x0);
  RestrictedField r = restrict_to_indicatrix(chart, berwald_derivative(metric, xi, k, path),
                                             required_jet_order(path, depth), grid, nmax);
  if (r.tangency_residual > kTangencyTolerance)
    throw GeometryError(metric.name() + ": Berwald derivative is not tangent to the indicatrix (residual " +
                        std::to_string(r.tangency_residual) + ")");
  return r.field;
}

} // namespace finsler
