#include "cli_commands.hpp"

#include "finsler/acceptance.hpp"
#include "finsler/errors.hpp"
#include "finsler/indicatrix.hpp"
#include "finsler/loop.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace finsler::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// Default check tolerances by numerical depth.
constexpr double kPipelineTolerance = 1e-6;
constexpr double kFlowTolerance = 1e-8;
constexpr double kAlgebraTolerance = 1e-10;
constexpr double kHomogeneityTolerance = 1e-12;
constexpr double kSmallLoopTolerance = 1e-3;

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

std::string fmt(const Vec2& v) { return "(" + fmt(v[0]) + ", " + fmt(v[1]) + ")"; }

Check check(std::string name, double value, double tolerance, std::string detail = {}) {
  return {std::move(name), value, tolerance, value <= tolerance, std::move(detail)};
}

Json config_echo(const RunConfig& c) {
  Json j{{"metric", c.metric},  {"at", to_json(c.at)},   {"dir", to_json(c.dir)},
         {"grid", c.grid},      {"nmax", c.nmax},        {"tol_ode", c.tol_ode},
         {"tol_check", c.tol_check ? Json(*c.tol_check) : Json(nullptr)},
         {"seed", c.seed}};
  return j;
}

SolverSettings solver(const RunConfig& c) {
  SolverSettings s;
  s.abs_tol = c.tol_ode;
  s.rel_tol = c.tol_ode;
  return s;
}

Report start(const std::string& command, const RunConfig& config, Json extra = Json::object()) {
  validate(config);
  Report r;
  r.command = command;
  r.config = config_echo(config);
  for (auto& [k, v] : extra.items()) r.config[k] = v;
  return r;
}

std::mt19937_64 rng_for(const RunConfig& c) { return std::mt19937_64(c.seed); }

Vec2 random_disk_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng)), a = 2.0 * kPi * u(rng);
  return {r * std::cos(a), r * std::sin(a)};
}

Vec2 random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0.0, 2.0 * kPi);
  const double t = a(rng);
  return {std::cos(t), std::sin(t)};
}

CircleVectorField random_field(std::mt19937_64& rng, int degree, int nmax) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CircleVectorField f(nmax);
  f.a0() = u(rng);
  for (int n = 1; n <= degree; ++n) {
    f.a(n) = u(rng);
    f.b(n) = u(rng);
  }
  return f;
}

double projective_factor_of(const FinslerMetric& m, const Vec2& x, const Vec2& y) {
  return m.has_projective_factor() ? m.projective_factor(x, y) : projective_factor_from_norm(m, x, y);
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &utc);
  return buf;
}

} // namespace

void validate(const RunConfig& c) {
  auto power_of_two = [](int n) { return n >= 16 && (n & (n - 1)) == 0; };
  if (!power_of_two(c.grid)) throw std::invalid_argument("--grid must be a power of two >= 16");
  if (c.nmax < 2) throw std::invalid_argument("--nmax must be >= 2");
  if (c.grid <= 2 * c.nmax) throw std::invalid_argument("--grid must exceed 2 * nmax");
  if (!(c.tol_ode > 0.0)) throw std::invalid_argument("--tol-ode must be positive");
  if (c.tol_check && !(*c.tol_check > 0.0)) throw std::invalid_argument("--tol-check must be positive");
  if (c.points < 1) throw std::invalid_argument("--points must be positive");
  if (c.depth < 0) throw std::invalid_argument("--depth must be >= 0");
  if (!(c.time > 0.0)) throw std::invalid_argument("--time must be positive");
}

bool Report::pass() const {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

Json Report::to_json(bool with_timing) const {
  Json j{{"command", command}, {"config", config}, {"results", results}};
  Json list = Json::array();
  for (const Check& c : checks) {
    Json e{{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    list.push_back(e);
  }
  j["checks"] = list;
  j["pass"] = pass();
  if (with_timing) j["duration_seconds"] = seconds;
  return j;
}

Report cmd_metric_info(const RunConfig& config) {
  Report r = start("metric-info", config);
  const FinslerMetric metric = FinslerMetric::parse(config.metric);
  const Vec2 x = config.at, y = config.dir;
  const double tol = config.tol_check.value_or(kHomogeneityTolerance);

  const double F = metric.norm(x, y);
  const double P = projective_factor_of(metric, x, y);
  const Mat2 g = fundamental_tensor(metric, x, y);
  r.results = {{"F", F},
               {"P", P},
               {"P_closed_form", metric.has_projective_factor()},
               {"g", to_json(g)},
               {"curvature", metric.curvature() ? Json(*metric.curvature()) : Json(nullptr)}};
  try {
    const SprayData s = preferred_path(metric) == SprayPath::Projective ? spray_projective(metric, x, y)
                                                                        : spray_generic(metric, x, y);
    r.results["spray"] = to_json(s);
  } catch (const DomainError& e) {
    r.results["spray"] = nullptr;
    r.results["spray_unavailable"] = e.what();
  }

  double dF = 0.0, dP = 0.0, dg = 0.0;
  for (double s : {0.5, 2.0, 3.7}) {
    dF = std::max(dF, std::abs(metric.norm(x, s * y) - s * F) / std::max(1.0, s * F));
    dP = std::max(dP, std::abs(projective_factor_of(metric, x, s * y) - s * P) / std::max(1.0, std::abs(s * P)));
    dg = std::max(dg, (fundamental_tensor(metric, x, s * y) - g).cwiseAbs().maxCoeff() / std::max(1.0, g.norm()));
  }
  const double energy = std::abs(y.dot(g * y) - F * F) / std::max(1.0, F * F);
  r.checks = {check("F(x, s y) = s F(x, y)", dF, tol), check("P(x, s y) = s P(x, y)", dP, tol),
              check("g(x, s y) = g(x, y)", dg, tol), check("g(y, y) = F^2", energy, tol)};
  r.highlights = {"F = " + fmt(F), "P = " + fmt(P),
                  "g = [[" + fmt(g(0, 0)) + ", " + fmt(g(0, 1)) + "], [" + fmt(g(1, 0)) + ", " + fmt(g(1, 1)) + "]]"};
  return r;
}

Report cmd_curvature(const RunConfig& config) {
  Report r = start("curvature", config, {{"points", config.points}});
  const FinslerMetric metric = FinslerMetric::parse(config.metric);
  const double tol = config.tol_check.value_or(kPipelineTolerance);
  auto rng = rng_for(config);

  Json samples = Json::array();
  std::vector<double> lambdas;
  double worst_residual = 0.0;
  int failures = 0;
  std::string first_error;
  for (int n = 0; n < config.points; ++n) {
    const Vec2 x = random_disk_point(rng, 0.8), y = random_unit(rng);
    Json s{{"x", to_json(x)}, {"y", to_json(y)}};
    try {
      const FlagCurvatureFit fit = flag_curvature_extract(metric, x, y);
      lambdas.push_back(fit.lambda);
      worst_residual = std::max(worst_residual, fit.residual);
      s["lambda"] = fit.lambda;
      s["residual"] = fit.residual;
    } catch (const std::exception& e) {
      ++failures;
      if (first_error.empty()) first_error = e.what();
      s["error"] = e.what();
    }
    samples.push_back(s);
  }

  double mean = 0.0, spread = 0.0;
  for (double l : lambdas) mean += l / static_cast<double>(std::max<std::size_t>(1, lambdas.size()));
  for (double l : lambdas) spread = std::max(spread, std::abs(l - mean));
  r.results = {{"samples", samples}, {"evaluated", lambdas.size()}, {"failed", failures}};
  r.results["lambda_mean"] = lambdas.empty() ? Json(nullptr) : Json(mean);
  r.results["lambda_spread"] = spread;
  r.results["max_residual"] = worst_residual;

  r.checks.push_back(check("points evaluated without error", failures, 0, first_error));
  if (!lambdas.empty()) {
    r.checks.push_back(check("lambda constant over samples", spread, tol));
    r.checks.push_back(check("constant-curvature fit residual", worst_residual, tol));
    if (metric.curvature())
      r.checks.push_back(check("mean lambda = " + fmt(*metric.curvature()), std::abs(mean - *metric.curvature()), tol));
    r.highlights.push_back("mean lambda = " + fmt(mean) + " over " + std::to_string(lambdas.size()) + " points");
  }
  return r;
}

Report cmd_geodesic(const RunConfig& config) {
  Report r = start("geodesic", config, {{"time", config.time}});
  const FinslerMetric metric = FinslerMetric::parse(config.metric);
  const double tol = config.tol_check.value_or(kFlowTolerance);
  const GeodesicResult g = geodesic(metric, config.at, config.dir, config.time, solver(config));

  const double F0 = metric.norm(config.at, config.dir);
  double speed_drift = 0.0;
  CsvTable csv{{"t", "x1", "x2"}, {}};
  for (const GeodesicSample& s : g.samples) {
    csv.rows.push_back({s.t, s.x[0], s.x[1]});
    speed_drift = std::max(speed_drift, std::abs(metric.norm(s.x, s.velocity) - F0));
  }
  r.csv = std::move(csv);
  r.results = {{"samples", g.samples.size()}, {"end", to_json(g.samples.back().x)},
               {"left_domain", g.left_domain}, {"exit_time", g.exit_time}, {"stats", to_json(g.stats)},
               {"speed_drift", speed_drift}};
  r.checks.push_back(check("F(x, x') constant along the geodesic", speed_drift, tol));
  if (metric.has_projective_factor()) {
    const double dev = chord_deviation(g, config.at, config.dir);
    r.results["chord_deviation"] = dev;
    r.checks.push_back(check("chord deviation (projectively flat)", dev, tol));
  }
  r.highlights = {"end point " + fmt(g.samples.back().x) + (g.left_domain ? " (left the domain)" : ""),
                  std::to_string(g.samples.size()) + " samples"};
  return r;
}

Report cmd_transport(const RunConfig& config) {
  Report r = start("transport", config, {{"curve", config.curve}});
  const FinslerMetric metric = FinslerMetric::parse(config.metric);
  const double tol = config.tol_check.value_or(kFlowTolerance);
  const LoopCurve curve = LoopCurve::parse(config.curve);
  if (curve.empty()) throw std::invalid_argument("transport: curve has zero length");

  const TransportResult t = parallel_transport(metric, curve, config.dir, solver(config), tol);
  const double F0 = metric.norm(curve.start(), config.dir), F1 = metric.norm(curve.end(), t.fiber);
  r.results = {{"start", to_json(curve.start())}, {"end", to_json(curve.end())},   {"length", curve.length()},
               {"y0", to_json(config.dir)},       {"fiber", to_json(t.fiber)},     {"F_start", F0},
               {"F_end", F1},                     {"norm_drift", t.norm_drift},    {"stats", to_json(t.stats)}};
  if (curve.closed()) {
    const double turn = std::remainder(IndicatrixChart::angle(t.fiber) - IndicatrixChart::angle(config.dir), 2 * kPi);
    r.results["angle_change"] = turn;
    r.highlights.push_back("angle change around the loop = " + fmt(turn));
  }
  r.checks.push_back(check("norm drift", t.norm_drift, tol));
  r.highlights.insert(r.highlights.begin(), "X(end) = " + fmt(t.fiber) + ", F = " + fmt(F1));
  return r;
}

Report cmd_loop(const RunConfig& config) {
  Report r = start("loop", config, {{"loop", config.loop}});
  const FinslerMetric metric = FinslerMetric::parse(config.metric);
  const LoopCurve loop = LoopCurve::parse(config.loop);
  const HolonomyResult h = loop_holonomy(metric, loop, config.grid, solver(config));

  const std::vector<double> disp = h.map.displacement();
  CsvTable csv{{"t", "displacement"}, {}};
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < h.map.size(); ++i) {
    csv.rows.push_back({h.map.grid_point(i), disp[i]});
    lo = i == 0 ? disp[i] : std::min(lo, disp[i]);
    hi = i == 0 ? disp[i] : std::max(hi, disp[i]);
  }
  r.csv = std::move(csv);
  r.results = {{"orientation", loop.empty() ? 0 : loop.orientation()},
               {"length", loop.empty() ? 0.0 : loop.length()},
               {"holonomy", to_json(h.map)},
               {"displacement_min", lo},
               {"displacement_max", hi},
               {"max_norm_drift", h.max_norm_drift},
               {"stats", to_json(h.stats)}};
  r.checks.push_back(check("norm drift", h.max_norm_drift, config.tol_check.value_or(kFlowTolerance)));
  r.highlights.push_back("displacement in [" + fmt(lo) + ", " + fmt(hi) + "]");

  // Square loops also get the small-loop limit at their base corner.
  if (config.loop.starts_with("square:") && !loop.empty()) {
    const double side = loop.segments().front().length();
    const Vec2 base = loop.start();
    const SmallLoopReport s = small_loop_field(metric, base, {side, side / 2, side / 4}, config.grid, config.nmax,
                                               solver(config));
    Json sj = to_json(s);
    sj["orientation_sign"] = 1;
    r.results["small_loop"] = sj;
    r.highlights.push_back("extrapolated field a0 = " + fmt(s.field.a0()) + ", nonconstant energy " +
                           fmt(s.field.nonconstant_energy()));
    try {
      const CircleVectorField xi = curvature_field(metric, base, Vec2(1, 0), Vec2(0, 1), config.grid, config.nmax);
      r.results["curvature_field"] = to_json(xi);
      r.checks.push_back(check("extrapolated field = curvature field", (s.field - xi).sup_norm(),
                               config.tol_check.value_or(kSmallLoopTolerance)));
    } catch (const DomainError& e) {
      r.results["curvature_field"] = nullptr;
      r.highlights.push_back(std::string("curvature field unavailable: ") + e.what());
    }
  }
  return r;
}

Report cmd_algebra(const RunConfig& config) {
  const int nmax = std::max(12, config.nmax);
  Report r = start("algebra", config, {{"algebra_nmax", nmax}});
  const double tol = config.tol_check.value_or(kAlgebraTolerance);
  auto rng = rng_for(config);

  const auto one = CircleVectorField::constant(1.0, nmax);
  const auto c1 = CircleVectorField::cos_mode(1, 1.0, nmax), s1 = CircleVectorField::sin_mode(1, 1.0, nmax);
  const double ex1 = (lie_bracket(one, c1).field - s1).max_coefficient();
  const double ex2 = (lie_bracket(c1, s1).field + one).max_coefficient();

  double anti = 0.0, jacobi = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto f = random_field(rng, 4, nmax), g = random_field(rng, 4, nmax), h = random_field(rng, 4, nmax);
    anti = std::max(anti, (lie_bracket(f, g).field + lie_bracket(g, f).field).max_coefficient());
    const CircleVectorField j = lie_bracket(f, lie_bracket(g, h).field).field +
                                lie_bracket(g, lie_bracket(h, f).field).field +
                                lie_bracket(h, lie_bracket(f, g).field).field;
    jacobi = std::max(jacobi, j.sup_norm());
  }

  double parseval = 0.0, roundtrip = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto f = random_field(rng, config.nmax, config.nmax);
    const std::vector<double> v = f.sample(config.grid);
    double mean_square = 0.0;
    for (double x : v) mean_square += x * x / static_cast<double>(v.size());
    const FourierResult d = fourier_decompose(v, config.nmax);
    parseval = std::max(parseval, std::abs(d.field.energy() - mean_square));
    roundtrip = std::max(roundtrip, (d.field - f).max_coefficient());
  }

  const SolverSettings flow = flow_solver_settings();
  double group = 0.0, inverse = 0.0;
  for (int k = 0; k < 3; ++k) {
    CircleVectorField f = random_field(rng, 3, config.nmax) * 0.2;
    const CircleMap full = exp_flow(f, 0.8, config.grid, flow), half = exp_flow(f, 0.4, config.grid, flow);
    group = std::max(group, distance(full, compose(half, half)));
    inverse = std::max(inverse, distance(compose(exp_flow(f, -0.8, config.grid, flow), full),
                                         CircleMap::identity(config.grid)));
  }

  r.results = {{"bracket_examples", {ex1, ex2}}, {"antisymmetry", anti},   {"jacobi", jacobi},
               {"parseval", parseval},           {"fourier_roundtrip", roundtrip},
               {"flow_group_property", group},   {"flow_inverse", inverse}};
  r.checks = {check("[1, cos t] = sin t", ex1, tol),
              check("[cos t, sin t] = -1", ex2, tol),
              check("antisymmetry, 100 seeded pairs", anti, tol),
              check("Jacobi identity, 100 seeded triples", jacobi, tol),
              check("Parseval identity", parseval, tol),
              check("Fourier round trip", roundtrip, tol),
              check("exp(s) = exp(s/2) o exp(s/2)", group, kFlowTolerance),
              check("exp(-s) o exp(s) = identity", inverse, kFlowTolerance)};
  return r;
}

Report cmd_closure(const RunConfig& config) {
  Report r = start("closure", config, {{"depth", config.depth}});
  const ClosureResult c = bracket_closure(fourier_generators(config.nmax), config.nmax, config.depth);
  r.results = to_json(c);
  const int expected = 2 * config.nmax + 1;
  r.checks.push_back(check("dimension reaches 2 Nmax + 1 = " + std::to_string(expected),
                           std::abs(c.final_dimension - expected), 0.0));
  r.highlights.push_back("final dimension " + std::to_string(c.final_dimension) + " at depth " +
                         std::to_string(c.depth_used));
  return r;
}

Report cmd_verify(const RunConfig& config) {
  Report r = start("verify", config);
  const FinslerMetric metric = FinslerMetric::parse(config.metric);
  VerifyOptions options;
  options.grid = config.grid;
  options.nmax = config.nmax;
  options.tolerance = config.tol_check.value_or(kPipelineTolerance);

  const TheoremReport t = verify_theorem(metric, config.at, options);
  r.results["theorem"] = to_json(t);
  r.checks.push_back({"theorem hypotheses (conditions A and B)", t.hypotheses_met ? 0.0 : 1.0, 0.0, t.hypotheses_met,
                      t.diagnostic});
  for (const ReportEntry& e : t.entries)
    r.checks.push_back({e.name + " [" + e.reference + "]", e.sup_error, options.tolerance, e.pass, {}});
  if (t.hypotheses_met) r.checks.push_back(check("generator spanning", t.spanning.residual, options.tolerance));
  if (t.generic_crosscheck_error)
    r.checks.push_back(check("generic vs projective pipeline", *t.generic_crosscheck_error, options.tolerance));

  AcceptanceOptions a;
  a.seed = config.seed;
  a.grid = config.grid;
  a.nmax = config.nmax;
  std::vector<int> ids = config.criteria;
  if (ids.empty())
    for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
  Json criteria = Json::array();
  for (int id : ids) {
    const CriterionResult c = run_criterion(id, a);
    criteria.push_back(to_json(c, config.timing));
    r.checks.push_back({"criterion " + std::to_string(c.id) + ": " + c.title, c.pass ? 0.0 : 1.0, 0.0, c.pass,
                        c.detail});
  }
  r.results["acceptance"] = criteria;
  if (t.lambda) r.highlights.push_back("c = " + fmt(t.conditions.c) + ", lambda = " + fmt(*t.lambda));
  return r;
}

std::vector<std::string> write_outputs(const Report& report, const RunConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out);
  std::string stem = (fs::path(config.out) / (report.command + "-" + timestamp())).string();
  // keep earlier outputs from the same second
  for (int k = 1; fs::exists(stem + ".json"); ++k)
    stem = (fs::path(config.out) / (report.command + "-" + timestamp() + "-" + std::to_string(k))).string();

  std::vector<std::string> written;
  {
    std::ofstream json(stem + ".json");
    json << report.to_json(config.timing).dump(2) << '\n';
    if (!json) throw std::runtime_error("cannot write " + stem + ".json");
    written.push_back(stem + ".json");
  }
  if (report.csv) {
    std::ofstream csv(stem + ".csv");
    csv << std::setprecision(17);
    for (std::size_t i = 0; i < report.csv->columns.size(); ++i) csv << (i ? "," : "") << report.csv->columns[i];
    csv << '\n';
    for (const auto& row : report.csv->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i];
      csv << '\n';
    }
    if (!csv) throw std::runtime_error("cannot write " + stem + ".csv");
    written.push_back(stem + ".csv");
  }
  return written;
}

std::string summary(const Report& report, bool with_timing) {
  std::ostringstream s;
  s << report.command << "  " << report.config.value("metric", "") << "  " << (report.pass() ? "PASS" : "FAIL");
  if (with_timing) s << "  (" << fmt(report.seconds) << " s)";
  s << '\n';
  for (const std::string& line : report.highlights) s << "  " << line << '\n';
  for (const Check& c : report.checks) {
    s << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name;
    if (c.tolerance > 0.0) s << ": " << std::setprecision(3) << c.value << " <= " << c.tolerance;
    if (!c.detail.empty()) s << "  (" << c.detail << ")";
    s << '\n';
  }
  return s.str();
}

} // namespace finsler::cli
