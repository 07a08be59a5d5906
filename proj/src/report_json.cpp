#include "finsler/report_json.hpp"

namespace finsler {

Json to_json(const Vec2& v) { return Json::array({v[0], v[1]}); }

Json to_json(const Mat2& m) { return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})}); }

Json to_json(const CircleVectorField& f) {
  return {{"nmax", f.nmax()}, {"a0", f.a0()}, {"cos", f.cos_coefficients()}, {"sin", f.sin_coefficients()}};
}

Json to_json(const SolverStats& s) { return {{"steps", s.steps}, {"rejected", s.rejected}}; }

Json to_json(const SprayData& s) {
  return {{"G", to_json(s.G)}, {"Gj", to_json(s.Gj)}, {"Gjk", Json::array({to_json(s.Gjk[0]), to_json(s.Gjk[1])})}};
}

Json to_json(const CircleMap& phi) {
  return {{"n", phi.size()}, {"displacement", phi.displacement()}, {"min_increment", phi.min_increment()}};
}

Json to_json(const ClosureResult& r) {
  return {{"dimension_trace", r.dimension_trace},
          {"final_dimension", r.final_dimension},
          {"depth_used", r.depth_used},
          {"stabilized", r.stabilized},
          {"max_truncation_loss", r.max_truncation_loss}};
}

Json to_json(const SmallLoopReport& r) {
  Json out{{"sides", r.sides},
           {"field", to_json(r.field)},
           {"observed_order", r.observed_order ? Json(*r.observed_order) : Json(nullptr)},
           {"converged", r.converged},
           {"max_norm_drift", r.max_norm_drift},
           {"top_mode_fraction", r.fourier.top_mode_fraction},
           {"aliasing_warning", r.fourier.aliasing_warning}};
  return out;
}

Json to_json(const TheoremConditions& c) {
  return {{"condition_a", c.condition_a},
          {"condition_b", c.condition_b},
          {"r0", c.r0},
          {"c", c.c},
          {"condition_a_residual", c.condition_a_residual},
          {"condition_b_residual", c.condition_b_residual},
          {"diagnostic", c.diagnostic}};
}

Json to_json(const ReportEntry& e) {
  return {{"name", e.name},
          {"reference", e.reference},
          {"expected", to_json(e.expected)},
          {"computed", to_json(e.computed)},
          {"sup_error", e.sup_error},
          {"pass", e.pass}};
}

Json to_json(const SpanningCheck& s) { return {{"residual", s.residual}, {"rank", s.rank}, {"pass", s.pass}}; }

Json to_json(const TheoremFields& f) {
  return {{"method", f.method},
          {"tangency_residual", f.tangency_residual},
          {"xi", to_json(f.xi)},
          {"nabla_1 xi", to_json(f.d1)},
          {"nabla_2 xi", to_json(f.d2)},
          {"nabla_1 nabla_2 xi", to_json(f.d12)},
          {"nabla_2 nabla_1 xi", to_json(f.d21)},
          {"nabla_1 nabla_1 xi", to_json(f.d11)},
          {"nabla_2 nabla_2 xi", to_json(f.d22)}};
}

Json to_json(const TheoremReport& r) {
  Json out{{"metric", r.metric},
           {"x0", to_json(r.x0)},
           {"conditions", to_json(r.conditions)},
           {"hypotheses_met", r.hypotheses_met},
           {"diagnostic", r.diagnostic},
           {"lambda", r.lambda ? Json(*r.lambda) : Json(nullptr)},
           {"lambda_fit_residual", r.lambda_fit_residual}};
  out["fields"] = r.fields ? to_json(*r.fields) : Json(nullptr);
  out["entries"] = algebra_report(r.entries);
  out["spanning"] = to_json(r.spanning);
  out["generic_crosscheck_error"] = r.generic_crosscheck_error ? Json(*r.generic_crosscheck_error) : Json(nullptr);
  return out;
}

Json algebra_report(const std::vector<ReportEntry>& entries) {
  Json out = Json::array();
  for (const ReportEntry& e : entries) out.push_back(to_json(e));
  return out;
}

} // namespace finsler
