#include "finsler/theorem.hpp"

#include "finsler/errors.hpp"
#include "finsler/spray.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace finsler {

namespace {

constexpr int kConditionSamples = 64;
constexpr double kConditionTolerance = 1e-10;
constexpr double kNonzero = 1e-12;

double sample_angle(int i, int n) { return 2.0 * std::numbers::pi * i / n; }

ReportEntry compare(std::string name, std::string reference, const CircleVectorField& expected,
                    const CircleVectorField& computed, double tolerance) {
  ReportEntry e{std::move(name), std::move(reference), expected, computed};
  e.sup_error = (computed - expected).sup_norm();
  e.pass = e.sup_error <= tolerance;
  return e;
}

// Largest componentwise gap between two fiber fields at a few indicatrix points.
double field_gap(const IndicatrixChart& chart, const FiberField& a, int order_a, const FiberField& b, int order_b,
                 int points) {
  double gap = 0.0;
  for (int i = 0; i < points; ++i) {
    const Vec2 y = chart.fiber(sample_angle(i, points) + 0.1);
    const auto va = a(JetPoint::seed(chart.base(), y, order_a));
    const auto vb = b(JetPoint::seed(chart.base(), y, order_b));
    for (int k = 0; k < 2; ++k) gap = std::max(gap, std::abs(va[k].value() - vb[k].value()));
  }
  return gap;
}

} // namespace

TheoremConditions check_conditions(const FinslerMetric& metric, const Vec2& x0) {
  TheoremConditions out;
  const IndicatrixChart chart(metric, x0);
  std::ostringstream diag;

  const std::optional<double> r0 = chart.euclidean_radius(kConditionTolerance);
  out.r0 = r0.value_or(1.0 / metric.norm(x0, Vec2(1.0, 0.0)));
  const Mat2 target = Mat2::Identity() / (out.r0 * out.r0);
  for (int i = 0; i < kConditionSamples; ++i) {
    const Mat2 g = fundamental_tensor(metric, x0, chart.fiber(sample_angle(i, kConditionSamples)));
    out.condition_a_residual = std::max(out.condition_a_residual, (g - target).cwiseAbs().maxCoeff());
  }
  out.condition_a = r0.has_value() && out.condition_a_residual <= kConditionTolerance * target(0, 0);
  if (!out.condition_a) diag << "condition A fails: F(x0, .) is not a multiple of the Euclidean norm; ";

  if (metric.has_projective_factor()) {
    std::vector<double> ratios;
    for (int i = 0; i < kConditionSamples; ++i) {
      const Vec2 y = chart.fiber(sample_angle(i, kConditionSamples));
      ratios.push_back(metric.projective_factor(x0, y) / metric.norm(x0, y));
    }
    out.c = ratios.front();
    for (double r : ratios) out.condition_b_residual = std::max(out.condition_b_residual, std::abs(r - out.c));
    out.condition_b = out.condition_b_residual <= kConditionTolerance * std::max(1.0, std::abs(out.c)) &&
                      std::abs(out.c) > kNonzero;
    if (!out.condition_b) {
      if (std::abs(out.c) <= kNonzero && out.condition_b_residual <= kConditionTolerance)
        diag << "condition B fails: c = 0; ";
      else
        diag << "condition B fails: P / F is not constant on the indicatrix; ";
    }
  } else {
    diag << "condition B cannot be checked: no closed-form projective factor; ";
  }
  out.diagnostic = diag.str();
  if (!out.diagnostic.empty()) out.diagnostic.resize(out.diagnostic.size() - 2);
  return out;
}

TheoremFields jet_pipeline_fields(const FinslerMetric& metric, const Vec2& x0, int grid, int nmax,
                                  std::optional<SprayPath> path_choice) {
  const SprayPath path = path_choice.value_or(preferred_path(metric));
  const IndicatrixChart chart(metric, x0);
  const FiberField xi = curvature_evaluator(metric, Vec2(1.0, 0.0), Vec2(0.0, 1.0), path);
  const FiberField d1 = berwald_derivative(metric, xi, 0, path);
  const FiberField d2 = berwald_derivative(metric, xi, 1, path);

  TheoremFields out;
  out.method = path == SprayPath::Projective ? "jet pipeline (projective spray)" : "jet pipeline (generic spray)";
  auto restrict = [&](const FiberField& f, int depth) {
    RestrictedField r = restrict_to_indicatrix(chart, f, required_jet_order(path, depth), grid, nmax);
    out.tangency_residual = std::max(out.tangency_residual, r.tangency_residual);
    return r.field;
  };
  out.xi = restrict(xi, 0);
  out.d1 = restrict(d1, 1);
  out.d2 = restrict(d2, 1);
  out.d12 = restrict(berwald_derivative(metric, d2, 0, path), 2);
  out.d21 = restrict(berwald_derivative(metric, d1, 1, path), 2);
  out.d11 = restrict(berwald_derivative(metric, d1, 0, path), 2);
  out.d22 = restrict(berwald_derivative(metric, d2, 1, path), 2);
  return out;
}

TheoremFields origin_formula_fields(const FinslerMetric& metric, const Vec2& x0, double lambda,
                                    const TheoremConditions& cond, int grid, int nmax) {
  if (!cond.satisfied()) throw GeometryError(metric.name() + ": " + cond.diagnostic);
  if (grid <= 2 * nmax) throw std::invalid_argument("indicatrix grid too coarse for the Fourier truncation");
  const double r0 = cond.r0;
  std::vector<double> xi(grid), d1(grid), d2(grid), d12(grid), d11(grid), d22(grid);

  for (int s = 0; s < grid; ++s) {
    const double t = sample_angle(s, grid);
    const Vec2 u(std::cos(t), std::sin(t)), du(-std::sin(t), std::cos(t));
    // scaled fiber coordinate: y = r0 * ytilde
    auto scaled = [&](const Vec2& yt) {
      JetPoint q = JetPoint::seed(x0, yt, 2, Seeding::FiberOnly);
      for (Jet& c : q.y) c *= r0;
      return q;
    };
    const double Fu = metric.norm(scaled(u)).value();
    const Vec2 y = u / Fu;
    const JetPoint q = scaled(y);
    const Jet F = metric.norm(q), P = metric.projective_factor(q);

    Vec2 dF, dP;
    Mat2 ddF;
    for (int j = 0; j < 2; ++j) {
      const Jet Fj = F.derivative(fiber_var(j));
      dF[j] = Fj.value();
      dP[j] = P.derivative(fiber_var(j)).value();
      for (int k = 0; k < 2; ++k) ddF(j, k) = Fj.derivative(fiber_var(k)).value();
    }
    const Mat2 g = dF * dF.transpose() + F.value() * ddF;
    const Vec2 gy = g * y;
    const Vec2 xi_vec = lambda * Vec2(-gy[1], gy[0]);

    const Jet Fu_jet = metric.norm(scaled(u));
    const Vec2 dFu(Fu_jet.derivative(fiber_var(0)).value(), Fu_jet.derivative(fiber_var(1)).value());
    Mat2 frame;
    frame.col(0) = du / Fu - u * dFu.dot(du) / (Fu * Fu);
    frame.col(1) = y;
    const double f = frame.partialPivLu().solve(xi_vec)[0];

    auto second = [&](int j, int k) {
      return 12.0 * dP[j] * dP[k] - 3.0 * lambda * (dF[j] * dF[k] + F.value() * ddF(j, k));
    };
    xi[s] = f;
    d1[s] = 3.0 * dP[0] * f;
    d2[s] = 3.0 * dP[1] * f;
    d12[s] = second(0, 1) * f;
    d11[s] = second(0, 0) * f;
    d22[s] = second(1, 1) * f;
  }

  TheoremFields out;
  out.method = "origin formulas (fiber derivatives of F and P at x0)";
  out.xi = fourier_decompose(xi, nmax).field;
  out.d1 = fourier_decompose(d1, nmax).field;
  out.d2 = fourier_decompose(d2, nmax).field;
  out.d12 = fourier_decompose(d12, nmax).field;
  out.d21 = out.d12;
  out.d11 = fourier_decompose(d11, nmax).field;
  out.d22 = fourier_decompose(d22, nmax).field;
  return out;
}

std::array<CircleVectorField, 4> second_berwald_fields(const FinslerMetric& metric, const Vec2& x0, int grid,
                                                       int nmax) {
  const TheoremConditions cond = check_conditions(metric, x0);
  if (!cond.satisfied()) throw GeometryError(metric.name() + ": " + cond.diagnostic);
  TheoremFields f;
  if (metric.kind() == MetricKind::BryantShen)
    f = origin_formula_fields(metric, x0, metric.curvature().value(), cond, grid, nmax);
  else
    f = jet_pipeline_fields(metric, x0, grid, nmax);
  return {f.d11, f.d12, f.d21, f.d22};
}

ClosedForms stated_forms(double c, double lambda, int nmax) {
  const double cl = c * lambda, c2l = c * c * lambda;
  ClosedForms f{CircleVectorField::constant(lambda, nmax),
                CircleVectorField::cos_mode(1, 3.0 * cl, nmax),
                CircleVectorField::sin_mode(1, -3.0 * cl, nmax),
                CircleVectorField::sin_mode(2, c2l, nmax),
                CircleVectorField(nmax),
                CircleVectorField(nmax)};
  // 2 c^2 cos^2 t = c^2 (1 + cos 2t)
  const double mean = lambda * (3.0 * c * c - lambda);
  f.d11 = CircleVectorField::constant(mean, nmax) + CircleVectorField::cos_mode(2, c2l, nmax);
  f.d22 = CircleVectorField::constant(mean, nmax) + CircleVectorField::cos_mode(2, -c2l, nmax);
  return f;
}

ClosedForms rederived_forms(double c, double lambda, int nmax) {
  const double cl = c * lambda, c2l = c * c * lambda;
  ClosedForms f{CircleVectorField::constant(lambda, nmax),
                CircleVectorField::cos_mode(1, 3.0 * cl, nmax),
                CircleVectorField::sin_mode(1, 3.0 * cl, nmax),
                CircleVectorField::sin_mode(2, 6.0 * c2l, nmax),
                CircleVectorField(nmax),
                CircleVectorField(nmax)};
  // 12 c^2 cos^2 t = 6 c^2 (1 + cos 2t)
  const double mean = lambda * (6.0 * c * c - 3.0 * lambda);
  f.d11 = CircleVectorField::constant(mean, nmax) + CircleVectorField::cos_mode(2, 6.0 * c2l, nmax);
  f.d22 = CircleVectorField::constant(mean, nmax) + CircleVectorField::cos_mode(2, -6.0 * c2l, nmax);
  return f;
}

SpanningCheck generator_spanning(const std::vector<CircleVectorField>& fields, double tolerance) {
  SpanningCheck out;
  if (fields.empty()) return out;
  int nmax = 2;
  for (const auto& f : fields) nmax = std::max(nmax, f.nmax());
  Eigen::MatrixXd A(2 * nmax + 1, static_cast<int>(fields.size()));
  for (std::size_t j = 0; j < fields.size(); ++j) A.col(static_cast<int>(j)) = fields[j].resized(nmax).coefficients();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  out.rank = static_cast<int>(qr.rank());
  for (const CircleVectorField& g : fourier_generators(nmax)) {
    const Eigen::VectorXd target = g.coefficients();
    const Eigen::VectorXd w = qr.solve(target);
    out.residual = std::max(out.residual, (A * w - target).norm());
  }
  out.pass = out.residual <= tolerance;
  return out;
}

std::vector<const ReportEntry*> TheoremReport::entries_for(const std::string& reference) const {
  std::vector<const ReportEntry*> out;
  for (const ReportEntry& e : entries)
    if (e.reference == reference) out.push_back(&e);
  return out;
}

TheoremReport verify_theorem(const FinslerMetric& metric, const Vec2& x0, const VerifyOptions& options) {
  TheoremReport report;
  report.metric = metric.name();
  report.x0 = x0;
  report.conditions = check_conditions(metric, x0);
  if (!report.conditions.satisfied()) {
    report.diagnostic = "theorem hypotheses not met: " + report.conditions.diagnostic;
    return report;
  }

  const bool origin_only = metric.kind() == MetricKind::BryantShen;
  if (origin_only) {
    report.lambda = metric.curvature().value();
  } else {
    // fitted, not taken from the catalog
    constexpr int kDirections = 8;
    const IndicatrixChart chart(metric, x0);
    double sum = 0.0;
    for (int i = 0; i < kDirections; ++i) {
      const FlagCurvatureFit fit = flag_curvature_extract(metric, x0, chart.fiber(sample_angle(i, kDirections)));
      sum += fit.lambda;
      report.lambda_fit_residual = std::max(report.lambda_fit_residual, fit.residual);
    }
    report.lambda = sum / kDirections;
  }
  const double lambda = *report.lambda;
  if (std::abs(lambda) <= kNonzero) {
    report.diagnostic = "theorem hypotheses not met: flag curvature is zero";
    return report;
  }
  report.hypotheses_met = true;

  const double c = report.conditions.c;
  report.fields = origin_only ? origin_formula_fields(metric, x0, lambda, report.conditions, options.grid, options.nmax)
                              : jet_pipeline_fields(metric, x0, options.grid, options.nmax);
  const TheoremFields& f = *report.fields;
  const double tol = options.tolerance;

  const std::array<std::pair<const char*, const CircleVectorField*>, 6> computed{{{"xi", &f.xi},
                                                                                  {"nabla_1 xi", &f.d1},
                                                                                  {"nabla_2 xi", &f.d2},
                                                                                  {"nabla_1 nabla_2 xi", &f.d12},
                                                                                  {"nabla_1 nabla_1 xi", &f.d11},
                                                                                  {"nabla_2 nabla_2 xi", &f.d22}}};
  for (const auto& [reference, forms] :
       {std::pair{"stated", stated_forms(c, lambda, options.nmax)},
        std::pair{"rederived", rederived_forms(c, lambda, options.nmax)}}) {
    const std::array<const CircleVectorField*, 6> expected{&forms.xi,  &forms.d1,  &forms.d2,
                                                           &forms.d12, &forms.d11, &forms.d22};
    for (std::size_t i = 0; i < computed.size(); ++i)
      report.entries.push_back(compare(computed[i].first, reference, *expected[i], *computed[i].second, tol));
  }

  report.entries.push_back(compare("nabla_2 nabla_1 xi = nabla_1 nabla_2 xi", "cross-check", f.d12, f.d21, tol));
  if (!origin_only) {
    const TheoremFields o = origin_formula_fields(metric, x0, lambda, report.conditions, options.grid, options.nmax);
    const std::array<const CircleVectorField*, 6> by_formula{&o.xi, &o.d1, &o.d2, &o.d12, &o.d11, &o.d22};
    for (std::size_t i = 0; i < computed.size(); ++i)
      report.entries.push_back(compare(std::string(computed[i].first) + " vs origin formulas", "cross-check",
                                       *by_formula[i], *computed[i].second, tol));

    if (options.generic_crosscheck_points > 0) {
      // second derivatives through the generic spray need order-7 jets; sample a few points
      const IndicatrixChart chart(metric, x0);
      double gap = 0.0;
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          auto nested = [&](SprayPath path) {
            const FiberField xi = curvature_evaluator(metric, Vec2(1.0, 0.0), Vec2(0.0, 1.0), path);
            return berwald_derivative(metric, berwald_derivative(metric, xi, k, path), j, path);
          };
          gap = std::max(gap, field_gap(chart, nested(SprayPath::Projective),
                                        required_jet_order(SprayPath::Projective, 2), nested(SprayPath::Generic),
                                        required_jet_order(SprayPath::Generic, 2),
                                        options.generic_crosscheck_points));
        }
      report.generic_crosscheck_error = gap;
    }
  }

  report.spanning = generator_spanning({f.xi, f.d1, f.d2, f.d12, f.d11, f.d22}, tol);
  return report;
}

} // namespace finsler
