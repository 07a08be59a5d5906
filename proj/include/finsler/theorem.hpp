#pragma once

#include "finsler/circle_field.hpp"
#include "finsler/indicatrix.hpp"
#include "finsler/metric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace finsler {

/// Condition A: F(x0, .) is a multiple of the Euclidean norm (g = r0^-2 I on
/// the indicatrix). Condition B: P(x0, y) = c F(x0, y) with c != 0.
struct TheoremConditions {
  bool condition_a = false;
  bool condition_b = false;
  double r0 = 0.0;
  double c = 0.0;
  double condition_a_residual = 0.0;  // max |g - r0^-2 I| over samples
  double condition_b_residual = 0.0;  // max |P/F - c| over samples
  std::string diagnostic;

  bool satisfied() const { return condition_a && condition_b; }
};

TheoremConditions check_conditions(const FinslerMetric& metric, const Vec2& x0);

/// xi = R(d1, d2) and its first and second Berwald derivatives on the indicatrix.
struct TheoremFields {
  CircleVectorField xi, d1, d2, d12, d21, d11, d22;
  double tangency_residual = 0.0;
  std::string method;
};

/// Fields by nested Berwald derivatives of the jet curvature evaluator.
TheoremFields jet_pipeline_fields(const FinslerMetric& metric, const Vec2& x0, int grid = kDefaultGrid,
                                  int nmax = kDefaultNmax, std::optional<SprayPath> path = std::nullopt);

/// Fields from fiber derivatives of F and P at x0 alone, in the chart scaled
/// by r0 so that F(x0, .) becomes the Euclidean norm:
/// nabla_k xi = 3 P_k xi and
/// nabla_j nabla_k xi = (12 P_j P_k - 3 lambda (F_j F_k + F F_jk)) xi.
/// Needs conditions A and B to hold.
TheoremFields origin_formula_fields(const FinslerMetric& metric, const Vec2& x0, double lambda,
                                    const TheoremConditions& cond,
                                    int grid = kDefaultGrid, int nmax = kDefaultNmax);

/// The four second derivatives; aborts with GeometryError unless conditions A and B hold at x0.
std::array<CircleVectorField, 4> second_berwald_fields(const FinslerMetric& metric, const Vec2& x0,
                                                       int grid = kDefaultGrid, int nmax = kDefaultNmax);

/// Closed forms in the angle coordinate for given c and lambda.
struct ClosedForms {
  CircleVectorField xi, d1, d2, d12, d11, d22;
};
/// xi = lambda, nabla_1 xi = 3 c lambda cos t, nabla_2 xi = -3 c lambda sin t,
/// nabla_1 nabla_2 xi = c^2 lambda sin 2t,
/// nabla_j nabla_j xi = lambda (2 c^2 u_j^2 + 2 c^2 - lambda) with u = (cos t, sin t).
ClosedForms stated_forms(double c, double lambda, int nmax = kDefaultNmax);
/// Same first line with nabla_2 xi = +3 c lambda sin t, and
/// nabla_j nabla_k xi = lambda (12 c^2 u_j u_k - 3 lambda delta_jk).
ClosedForms rederived_forms(double c, double lambda, int nmax = kDefaultNmax);

struct ReportEntry {
  std::string name;
  std::string reference;  // "stated", "rederived" or "cross-check"
  CircleVectorField expected;
  CircleVectorField computed;
  double sup_error = 0.0;
  bool pass = false;
};

struct SpanningCheck {
  double residual = 0.0;  // max over targets of the least-squares residual norm
  int rank = 0;
  bool pass = false;
};

/// Least-squares fit of the five Fourier generators by the given fields.
SpanningCheck generator_spanning(const std::vector<CircleVectorField>& fields, double tolerance);

struct VerifyOptions {
  int grid = kDefaultGrid;
  int nmax = kDefaultNmax;
  double tolerance = 1e-6;
  int generic_crosscheck_points = 8;  // 0 disables the generic-path check
};

struct TheoremReport {
  std::string metric;
  Vec2 x0 = Vec2::Zero();
  TheoremConditions conditions;
  std::optional<double> lambda;
  double lambda_fit_residual = 0.0;
  bool hypotheses_met = false;
  std::string diagnostic;
  std::optional<TheoremFields> fields;
  std::vector<ReportEntry> entries;
  SpanningCheck spanning;
  std::optional<double> generic_crosscheck_error;

  /// Entries of one reference kind.
  std::vector<const ReportEntry*> entries_for(const std::string& reference) const;
};

/// Checks the hypotheses at x0, computes the six fields, compares them with
/// the stated and rederived closed forms and checks generator spanning.
TheoremReport verify_theorem(const FinslerMetric& metric, const Vec2& x0, const VerifyOptions& options = {});

} // namespace finsler
