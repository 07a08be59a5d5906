#pragma once

#include "finsler/circle_field.hpp"
#include "finsler/circle_map.hpp"
#include "finsler/indicatrix.hpp"
#include "finsler/loop.hpp"
#include "finsler/metric.hpp"
#include "finsler/ode.hpp"

#include <optional>
#include <string>
#include <vector>

namespace finsler {

struct GeodesicSample {
  double t;
  Vec2 x;
  Vec2 velocity;
};

struct GeodesicResult {
  std::vector<GeodesicSample> samples;  // one per accepted step
  SolverStats stats;
  bool left_domain = false;
  double exit_time = 0.0;
};

/// Solves x'' + 2 G(x, x') = 0 on [0, T]; stops early at the domain boundary.
GeodesicResult geodesic(const FinslerMetric& metric, const Vec2& x0, const Vec2& y0, double T,
                        const SolverSettings& settings = {});

/// Largest distance of the samples from the line through x0 with direction y0.
double chord_deviation(const GeodesicResult& path, const Vec2& x0, const Vec2& y0);

struct TransportResult {
  Vec2 fiber;                // X at the end of the curve
  double norm_drift = 0.0;   // max |F(c(t), X(t)) - F(c(0), X(0))| over accepted steps
  bool drift_exceeded = false;
  SolverStats stats;
};

/// Norm drift above this flags a transport run.
inline constexpr double kDefaultDriftTolerance = 1e-8;

/// Solves dX/dt + G^i_j(c, X) c'^j = 0 along the segment.
TransportResult parallel_transport(const FinslerMetric& metric, const CurveSegment& segment, const Vec2& y0,
                                   const SolverSettings& settings = {},
                                   double drift_tolerance = kDefaultDriftTolerance);
/// Along all segments in order.
TransportResult parallel_transport(const FinslerMetric& metric, const LoopCurve& curve, const Vec2& y0,
                                   const SolverSettings& settings = {},
                                   double drift_tolerance = kDefaultDriftTolerance);

struct HolonomyResult {
  CircleMap map;
  double max_norm_drift = 0.0;
  SolverStats stats;
};

/// Transports y(t_i) around the loop for every grid angle and lifts the
/// resulting angles by continuity. Loops shorter than kDegenerateLength give
/// the identity. Throws SolverError on drift or a non-monotone lift.
HolonomyResult loop_holonomy(const FinslerMetric& metric, const LoopCurve& loop, int n,
                             const SolverSettings& settings = {});

struct SmallLoopReport {
  CircleVectorField field;                // extrapolated to s = 0
  std::vector<double> sides;
  std::vector<std::vector<double>> profiles;  // displacement / s^2 on the grid, per side
  std::vector<double> extrapolated;           // on the grid
  std::optional<double> observed_order;       // absent when successive profiles coincide
  bool converged = true;
  double max_norm_drift = 0.0;
  FourierResult fourier;
};

/// f_s(t) = (phi_s(t) - t) / s^2 for the counterclockwise coordinate square
/// of side s based at x0, polynomially extrapolated to s = 0.
SmallLoopReport small_loop_field(const FinslerMetric& metric, const Vec2& x0, const std::vector<double>& sides,
                                 int n = kDefaultGrid, int nmax = kDefaultNmax,
                                 const SolverSettings& settings = {});

} // namespace finsler
