#pragma once

#include "finsler/metric.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace finsler {

/// A smooth map [0, 1] -> chart with its velocity.
struct CurveSegment {
  std::function<Vec2(double)> point;
  std::function<Vec2(double)> velocity;

  static CurveSegment line(const Vec2& from, const Vec2& to);
  /// Circular arc from angle `from` to angle `to` (radians, either direction).
  static CurveSegment arc(const Vec2& center, double radius, double from, double to);

  Vec2 start() const { return point(0.0); }
  Vec2 end() const { return point(1.0); }
  CurveSegment reversed() const;
  /// Arc length by composite Gauss-Legendre quadrature.
  double length() const;
};

/// A piecewise-smooth curve in the base chart. Loops are closed within
/// kClosureTolerance; zero-length segments are dropped on construction.
class LoopCurve {
public:
  LoopCurve() = default;
  explicit LoopCurve(std::vector<CurveSegment> segments);

  /// Base point first, then x0 + s e1, x0 + s e1 + s e2, x0 + s e2.
  static LoopCurve square(const Vec2& base, double side);
  /// Vertices joined by straight lines and closed back to the first vertex.
  static LoopCurve polyline(const std::vector<Vec2>& vertices);
  /// `square:<x>,<y>,<s>` or `polyline:x1,y1;x2,y2;...`.
  static LoopCurve parse(std::string_view spec);

  const std::vector<CurveSegment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  Vec2 start() const;
  Vec2 end() const;
  bool closed() const;
  double length() const;
  /// +1 counterclockwise, -1 clockwise, 0 for zero enclosed area.
  int orientation() const;

  LoopCurve reversed() const;
  /// This curve followed by `next`.
  LoopCurve then(const LoopCurve& next) const;

private:
  std::vector<CurveSegment> segments_;
};

inline constexpr double kClosureTolerance = 1e-12;
/// Segments and loops shorter than this are treated as points.
inline constexpr double kDegenerateLength = 1e-12;

} // namespace finsler
