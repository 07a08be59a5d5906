#include "finsler/metric.hpp"

#include "finsler/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace finsler {

JetPoint JetPoint::seed(const Vec2& x, const Vec2& y, int order, Seeding seeding) {
  const bool seed_base = seeding != Seeding::FiberOnly;
  const bool seed_fiber = seeding != Seeding::BaseOnly;
  JetPoint p;
  for (int i = 0; i < 2; ++i) {
    p.x[i] = seed_base ? Jet::variable(base_var(i), x[i], order) : Jet(x[i], order);
    p.y[i] = seed_fiber ? Jet::variable(fiber_var(i), y[i], order) : Jet(y[i], order);
  }
  return p;
}

namespace {

template <class T>
T funk_norm_impl(int sign, const T& x1, const T& x2, const T& y1, const T& y2) {
  using std::sqrt;
  const T xx = x1 * x1 + x2 * x2;
  const T yy = y1 * y1 + y2 * y2;
  const T xy = x1 * y1 + x2 * y2;
  const T radicand = yy - (xx * yy - xy * xy);
  return (sqrt(radicand) + double(sign) * xy) / (1.0 - xx);
}

template <class T>
T funk_projective_impl(int sign, const T& x1, const T& x2, const T& y1, const T& y2) {
  using std::sqrt;
  const T xx = x1 * x1 + x2 * x2;
  const T yy = y1 * y1 + y2 * y2;
  const T xy = x1 * y1 + x2 * y2;
  const T radicand = yy - (xx * yy - xy * xy);
  return 0.5 * (double(sign) * sqrt(radicand) + xy) / (1.0 - xx);
}

bool funk_domain(const Vec2& x) { return x.norm() < 1.0 - kFunkBoundaryMargin; }

void check_funk(int sign, const Vec2& x, const Vec2& y) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("Funk sign must be +1 or -1");
  if (!funk_domain(x)) throw DomainError("Funk metric: base point outside the open unit disk");
  if (y.isZero(0.0)) throw DomainError("Funk metric: zero fiber vector");
}

void check_alpha(double alpha) {
  if (!(std::abs(alpha) < std::numbers::pi / 2))
    throw DomainError("Bryant-Shen parameter must satisfy |alpha| < pi/2");
}

// Origin-only data: x-derivatives are unknown, so seeded base jets are refused.
void require_origin(const JetPoint& p) {
  for (const Jet& xi : p.x)
    if (xi.value() != 0.0 || !xi.is_constant())
      throw DomainError("Bryant-Shen metric is only available at the chart origin");
}

Jet jet_norm2(const JetPoint& p) { return sqrt(p.y[0] * p.y[0] + p.y[1] * p.y[1]); }

} // namespace

double funk_norm(int sign, const Vec2& x, const Vec2& y) {
  check_funk(sign, x, y);
  return funk_norm_impl<double>(sign, x[0], x[1], y[0], y[1]);
}

double funk_projective_factor(int sign, const Vec2& x, const Vec2& y) {
  check_funk(sign, x, y);
  return funk_projective_impl<double>(sign, x[0], x[1], y[0], y[1]);
}

std::pair<double, double> bryant_shen_origin(double alpha, const Vec2& y) {
  check_alpha(alpha);
  if (y.isZero(0.0)) throw DomainError("Bryant-Shen metric: zero fiber vector");
  const double r = y.norm();
  return {r * std::cos(alpha), r * std::sin(alpha)};
}

FinslerMetric FinslerMetric::funk(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("Funk sign must be +1 or -1");
  FinslerMetric m;
  m.kind_ = sign > 0 ? MetricKind::FunkPlus : MetricKind::FunkMinus;
  m.name_ = sign > 0 ? "funk:+" : "funk:-";
  m.norm_ = [sign](const JetPoint& p) {
    return funk_norm_impl<Jet>(sign, p.x[0], p.x[1], p.y[0], p.y[1]);
  };
  m.projective_ = [sign](const JetPoint& p) {
    return funk_projective_impl<Jet>(sign, p.x[0], p.x[1], p.y[0], p.y[1]);
  };
  m.domain_ = funk_domain;
  m.curvature_ = -0.25;
  return m;
}

FinslerMetric FinslerMetric::euclidean() {
  FinslerMetric m;
  m.kind_ = MetricKind::Euclidean;
  m.name_ = "euclid";
  m.norm_ = jet_norm2;
  m.projective_ = [](const JetPoint& p) { return Jet(0.0, p.y[0].order()); };
  m.domain_ = [](const Vec2&) { return true; };
  m.curvature_ = 0.0;
  return m;
}

FinslerMetric FinslerMetric::bryant_shen(double alpha) {
  check_alpha(alpha);
  FinslerMetric m;
  m.kind_ = MetricKind::BryantShen;
  std::ostringstream name;
  name.precision(17);
  name << "bryant:" << alpha;
  m.name_ = name.str();
  m.alpha_ = alpha;
  m.norm_ = [alpha](const JetPoint& p) {
    require_origin(p);
    return jet_norm2(p) * std::cos(alpha);
  };
  m.projective_ = [alpha](const JetPoint& p) {
    require_origin(p);
    return jet_norm2(p) * std::sin(alpha);
  };
  m.domain_ = [](const Vec2& x) { return x.isZero(0.0); };
  m.curvature_ = 1.0;
  return m;
}

FinslerMetric FinslerMetric::custom(std::string name, Evaluator norm, DomainPredicate domain,
                                    std::optional<Evaluator> projective,
                                    std::optional<double> curvature) {
  FinslerMetric m;
  m.kind_ = MetricKind::Custom;
  m.name_ = std::move(name);
  m.norm_ = std::move(norm);
  m.domain_ = std::move(domain);
  m.projective_ = std::move(projective);
  m.curvature_ = curvature;
  return m;
}

FinslerMetric FinslerMetric::parse(std::string_view spec) {
  if (spec == "funk:+") return funk(1);
  if (spec == "funk:-") return funk(-1);
  if (spec == "euclid") return euclidean();
  if (spec.starts_with("bryant:")) {
    const std::string arg(spec.substr(7));
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size())
      throw std::invalid_argument("bad Bryant-Shen parameter in metric spec '" + std::string(spec) + "'");
    return bryant_shen(alpha);
  }
  throw std::invalid_argument("unknown metric spec '" + std::string(spec) +
                              "' (expected funk:+, funk:-, bryant:<alpha>, euclid)");
}

void FinslerMetric::check_point(const JetPoint& p) const {
  if (!domain_(p.base())) throw DomainError(name_ + ": base point outside the metric domain");
  if (p.fiber().isZero(0.0)) throw DomainError(name_ + ": zero fiber vector");
}

Jet FinslerMetric::norm(const JetPoint& p) const {
  check_point(p);
  return norm_(p);
}

Jet FinslerMetric::projective_factor(const JetPoint& p) const {
  if (!projective_) throw std::logic_error(name_ + ": no closed-form projective factor");
  check_point(p);
  return (*projective_)(p);
}

double FinslerMetric::norm(const Vec2& x, const Vec2& y) const {
  return norm(JetPoint::seed(x, y, 0, Seeding::BaseOnly)).value();
}

double FinslerMetric::projective_factor(const Vec2& x, const Vec2& y) const {
  return projective_factor(JetPoint::seed(x, y, 0, Seeding::BaseOnly)).value();
}

double projective_factor_from_norm(const FinslerMetric& metric, const Vec2& x, const Vec2& y) {
  const Jet f = metric.norm(JetPoint::seed(x, y, 1, Seeding::BaseOnly));
  double dfdx_y = 0.0;
  for (int i = 0; i < 2; ++i) {
    MultiIndex alpha{};
    alpha[base_var(i)] = 1;
    dfdx_y += f.partial(alpha) * y[i];
  }
  return dfdx_y / (2.0 * f.value());
}

} // namespace finsler
