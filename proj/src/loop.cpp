#include "finsler/loop.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace finsler {

namespace {

// 5-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 5> kNodes{0.04691007703066800, 0.23076534494715845, 0.5,
                                       0.76923465505284155, 0.95308992296933200};
constexpr std::array<double, 5> kWeights{0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                                         0.23931433524968324, 0.11846344252809454};

double signed_area(const LoopCurve& loop) {
  // Green's theorem: A = 1/2 \oint x dy - y dx
  double area = 0.0;
  constexpr int kPanels = 16;
  for (const CurveSegment& seg : loop.segments())
    for (int p = 0; p < kPanels; ++p)
      for (std::size_t q = 0; q < kNodes.size(); ++q) {
        const double tau = (p + kNodes[q]) / kPanels;
        const Vec2 c = seg.point(tau), v = seg.velocity(tau);
        area += 0.5 * kWeights[q] / kPanels * (c[0] * v[1] - c[1] * v[0]);
      }
  return area;
}

std::vector<double> parse_numbers(std::string_view text, char sep, std::string_view spec) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, sep)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw std::invalid_argument("bad number '" + item + "' in loop spec '" + std::string(spec) + "'");
    out.push_back(v);
  }
  return out;
}

} // namespace

CurveSegment CurveSegment::line(const Vec2& from, const Vec2& to) {
  const Vec2 d = to - from;
  return {[from, d](double t) -> Vec2 { return from + t * d; }, [d](double) -> Vec2 { return d; }};
}

CurveSegment CurveSegment::arc(const Vec2& center, double radius, double from, double to) {
  const double sweep = to - from;
  return {[=](double t) -> Vec2 {
            const double a = from + t * sweep;
            return center + radius * Vec2(std::cos(a), std::sin(a));
          },
          [=](double t) -> Vec2 {
            const double a = from + t * sweep;
            return radius * sweep * Vec2(-std::sin(a), std::cos(a));
          }};
}

CurveSegment CurveSegment::reversed() const {
  auto p = point;
  auto v = velocity;
  return {[p](double t) { return p(1.0 - t); }, [v](double t) -> Vec2 { return -v(1.0 - t); }};
}

double CurveSegment::length() const {
  constexpr int kPanels = 16;
  double len = 0.0;
  for (int p = 0; p < kPanels; ++p)
    for (std::size_t q = 0; q < kNodes.size(); ++q)
      len += kWeights[q] / kPanels * velocity((p + kNodes[q]) / kPanels).norm();
  return len;
}

LoopCurve::LoopCurve(std::vector<CurveSegment> segments) {
  for (CurveSegment& s : segments)
    if (s.length() >= kDegenerateLength) segments_.push_back(std::move(s));
  for (std::size_t i = 1; i < segments_.size(); ++i)
    if ((segments_[i].start() - segments_[i - 1].end()).norm() > kClosureTolerance)
      throw std::invalid_argument("curve segments are not contiguous");
}

LoopCurve LoopCurve::square(const Vec2& base, double side) {
  if (!(side > 0.0)) throw std::invalid_argument("square loop side must be positive");
  const Vec2 e1(side, 0.0), e2(0.0, side);
  return polyline({base, base + e1, base + e1 + e2, base + e2});
}

LoopCurve LoopCurve::polyline(const std::vector<Vec2>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("polyline needs at least one vertex");
  std::vector<CurveSegment> segs;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    segs.push_back(CurveSegment::line(vertices[i], vertices[(i + 1) % vertices.size()]));
  return LoopCurve(std::move(segs));
}

LoopCurve LoopCurve::parse(std::string_view spec) {
  if (spec.starts_with("square:")) {
    const auto v = parse_numbers(spec.substr(7), ',', spec);
    if (v.size() != 3) throw std::invalid_argument("square loop spec needs <x>,<y>,<s>: '" + std::string(spec) + "'");
    return square(Vec2(v[0], v[1]), v[2]);
  }
  if (spec.starts_with("polyline:")) {
    std::vector<Vec2> vertices;
    std::string item;
    std::istringstream in{std::string(spec.substr(9))};
    while (std::getline(in, item, ';')) {
      const auto v = parse_numbers(item, ',', spec);
      if (v.size() != 2) throw std::invalid_argument("polyline vertex needs x,y: '" + item + "'");
      vertices.emplace_back(v[0], v[1]);
    }
    return polyline(vertices);
  }
  throw std::invalid_argument("unknown loop spec '" + std::string(spec) +
                              "' (expected square:<x>,<y>,<s> or polyline:x1,y1;x2,y2;...)");
}

Vec2 LoopCurve::start() const {
  if (segments_.empty()) throw std::logic_error("empty curve has no start");
  return segments_.front().start();
}

Vec2 LoopCurve::end() const {
  if (segments_.empty()) throw std::logic_error("empty curve has no end");
  return segments_.back().end();
}

bool LoopCurve::closed() const { return empty() || (end() - start()).norm() <= kClosureTolerance; }

double LoopCurve::length() const {
  double len = 0.0;
  for (const CurveSegment& s : segments_) len += s.length();
  return len;
}

int LoopCurve::orientation() const {
  const double a = signed_area(*this);
  if (std::abs(a) <= kDegenerateLength * kDegenerateLength) return 0;
  return a > 0.0 ? 1 : -1;
}

LoopCurve LoopCurve::reversed() const {
  std::vector<CurveSegment> segs;
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) segs.push_back(it->reversed());
  return LoopCurve(std::move(segs));
}

LoopCurve LoopCurve::then(const LoopCurve& next) const {
  std::vector<CurveSegment> segs = segments_;
  segs.insert(segs.end(), next.segments_.begin(), next.segments_.end());
  return LoopCurve(std::move(segs));
}

} // namespace finsler
