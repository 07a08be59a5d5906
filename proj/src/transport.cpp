#include "finsler/transport.hpp"

#include "finsler/errors.hpp"
#include "finsler/spray.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace finsler {

namespace {

using State4 = std::array<double, 4>;
using State2 = std::array<double, 2>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) { return a - kTwoPi * std::round(a / kTwoPi); }

// Neville evaluation at s = 0 of the interpolating polynomial through (s_i, v_i).
double extrapolate_to_zero(const std::vector<double>& s, std::vector<double> v) {
  const std::size_t m = s.size();
  for (std::size_t level = 1; level < m; ++level)
    for (std::size_t i = 0; i + level < m; ++i)
      v[i] = (s[i + level] * v[i] - s[i] * v[i + 1]) / (s[i + level] - s[i]);
  return v[0];
}

} // namespace

GeodesicResult geodesic(const FinslerMetric& metric, const Vec2& x0, const Vec2& y0, double T,
                        const SolverSettings& settings) {
  if (y0.isZero(0.0)) throw DomainError("geodesic: zero initial velocity");
  if (!metric.in_domain(x0)) throw DomainError(metric.name() + ": geodesic starts outside the domain");
  if (!(T > 0.0)) throw std::invalid_argument("geodesic: T must be positive");

  GeodesicResult out;
  State4 state{x0[0], x0[1], y0[0], y0[1]};
  auto rhs = [&metric](const State4& s, double) {
    const Vec2 x(s[0], s[1]), y(s[2], s[3]);
    if (!metric.in_domain(x)) throw DomainError(metric.name() + ": geodesic left the domain");
    const Vec2 G = geodesic_coefficients(metric, x, y);
    return State4{y[0], y[1], -2.0 * G[0], -2.0 * G[1]};
  };
  auto record = [&out](const State4& s, double t) {
    out.samples.push_back({t, Vec2(s[0], s[1]), Vec2(s[2], s[3])});
  };
  const OdeOutcome r = integrate_ode<4>(rhs, state, 0.0, T, settings, record);
  out.stats = r.stats;
  out.left_domain = r.halted;
  out.exit_time = r.halted ? r.halt_time : T;
  return out;
}

double chord_deviation(const GeodesicResult& path, const Vec2& x0, const Vec2& y0) {
  const Vec2 d = y0.normalized();
  double worst = 0.0;
  for (const GeodesicSample& s : path.samples) {
    const Vec2 r = s.x - x0;
    worst = std::max(worst, std::abs(r[0] * d[1] - r[1] * d[0]));
  }
  return worst;
}

TransportResult parallel_transport(const FinslerMetric& metric, const CurveSegment& segment, const Vec2& y0,
                                   const SolverSettings& settings, double drift_tolerance) {
  if (y0.isZero(0.0)) throw DomainError("parallel transport: zero initial vector");
  const double F0 = metric.norm(segment.start(), y0);
  const double breakdown = 1e-12 * y0.norm();

  TransportResult out;
  State2 X{y0[0], y0[1]};
  auto rhs = [&](const State2& s, double t) {
    const Vec2 v(s[0], s[1]);
    if (v.norm() < breakdown) throw SolverError("parallel transport: transported vector collapsed to zero");
    const Vec2 dX = -nonlinear_connection(metric, segment.point(t), v) * segment.velocity(t);
    return State2{dX[0], dX[1]};
  };
  auto track = [&](const State2& s, double t) {
    out.norm_drift = std::max(out.norm_drift, std::abs(metric.norm(segment.point(t), Vec2(s[0], s[1])) - F0));
  };
  const OdeOutcome r = integrate_ode<2>(rhs, X, 0.0, 1.0, settings, track);
  if (r.halted) throw SolverError("parallel transport left the metric domain: " + r.halt_reason);
  out.fiber = Vec2(X[0], X[1]);
  out.stats = r.stats;
  out.drift_exceeded = out.norm_drift > drift_tolerance;
  return out;
}

TransportResult parallel_transport(const FinslerMetric& metric, const LoopCurve& curve, const Vec2& y0,
                                   const SolverSettings& settings, double drift_tolerance) {
  TransportResult out;
  out.fiber = y0;
  if (curve.empty()) return out;
  const double F0 = metric.norm(curve.start(), y0);
  for (const CurveSegment& seg : curve.segments()) {
    const TransportResult part = parallel_transport(metric, seg, out.fiber, settings, drift_tolerance);
    // drift is measured against the norm at the start of the whole curve
    const double offset = std::abs(metric.norm(seg.start(), out.fiber) - F0);
    out.norm_drift = std::max(out.norm_drift, part.norm_drift + offset);
    out.fiber = part.fiber;
    out.stats.steps += part.stats.steps;
    out.stats.rejected += part.stats.rejected;
  }
  out.drift_exceeded = out.norm_drift > drift_tolerance;
  return out;
}

HolonomyResult loop_holonomy(const FinslerMetric& metric, const LoopCurve& loop, int n,
                             const SolverSettings& settings) {
  if (n < 16) throw std::invalid_argument("loop_holonomy: grid size must be >= 16");
  if (loop.empty() || loop.length() < kDegenerateLength) return HolonomyResult{CircleMap::identity(n), 0.0, {}};
  if (!loop.closed()) throw std::invalid_argument("loop_holonomy: curve is not closed");

  const IndicatrixChart chart(metric, loop.start());
  HolonomyResult out{CircleMap::identity(n), 0.0, {}};
  std::vector<double> lift(n);
  double previous = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    const TransportResult tr = parallel_transport(metric, loop, chart.fiber(t), settings);
    if (tr.drift_exceeded)
      throw SolverError("loop_holonomy: norm drift " + std::to_string(tr.norm_drift) + " at grid angle " +
                        std::to_string(t));
    out.max_norm_drift = std::max(out.max_norm_drift, tr.norm_drift);
    out.stats.steps += tr.stats.steps;
    out.stats.rejected += tr.stats.rejected;
    // continuous lift of the displacement, starting in (-pi, pi]
    const double raw = wrap_angle(IndicatrixChart::angle(tr.fiber) - t);
    const double disp = i == 0 ? raw : previous + wrap_angle(raw - previous);
    lift[i] = t + disp;
    previous = disp;
  }
  out.map = CircleMap(std::move(lift));
  return out;
}

SmallLoopReport small_loop_field(const FinslerMetric& metric, const Vec2& x0, const std::vector<double>& sides,
                                 int n, int nmax, const SolverSettings& settings) {
  if (sides.size() < 3) throw std::invalid_argument("small_loop_field: need at least three loop sizes");
  for (std::size_t i = 0; i < sides.size(); ++i)
    if (!(sides[i] > 0.0) || (i > 0 && !(sides[i] < sides[i - 1])))
      throw std::invalid_argument("small_loop_field: sides must be positive and strictly decreasing");

  SmallLoopReport out;
  out.sides = sides;
  for (double s : sides) {
    const HolonomyResult h = loop_holonomy(metric, LoopCurve::square(x0, s), n, settings);
    out.max_norm_drift = std::max(out.max_norm_drift, h.max_norm_drift);
    std::vector<double> profile = h.map.displacement();
    for (double& v : profile) v /= s * s;
    out.profiles.push_back(std::move(profile));
  }

  out.extrapolated.resize(n);
  std::vector<double> column(sides.size());
  for (int i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < sides.size(); ++j) column[j] = out.profiles[j][i];
    out.extrapolated[i] = extrapolate_to_zero(sides, column);
  }

  // observed order from the last three sizes: |f_a - f_b| / |f_b - f_c| ~ (s_a / s_b)^p
  const std::size_t m = sides.size();
  double d1 = 0.0, d2 = 0.0;
  for (int i = 0; i < n; ++i) {
    d1 = std::max(d1, std::abs(out.profiles[m - 3][i] - out.profiles[m - 2][i]));
    d2 = std::max(d2, std::abs(out.profiles[m - 2][i] - out.profiles[m - 1][i]));
  }
  constexpr double kCoincident = 1e-12;
  if (d1 > kCoincident && d2 > kCoincident) {
    const double ratio = (sides[m - 3] - sides[m - 2]) / (sides[m - 2] - sides[m - 1]);
    out.observed_order = std::log(d1 / d2) / std::log(ratio);
    out.converged = *out.observed_order >= 0.5;
  }

  out.fourier = fourier_decompose(out.extrapolated, nmax);
  out.field = out.fourier.field;
  return out;
}

} // namespace finsler
