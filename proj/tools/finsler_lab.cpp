// finsler-lab: command-line experiments on Finsler holonomy.
//
// Exit status: 0 when every check of the command passes, 1 when a check
// fails, 2 on usage or evaluation errors.

#include "cli_commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <map>

namespace {

using finsler::Vec2;
using namespace finsler::cli;

Vec2 parse_pair(const std::string& text, const std::string& flag) {
  const auto comma = text.find(',');
  std::size_t used_a = 0, used_b = 0;
  double a = 0.0, b = 0.0;
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    a = std::stod(text.substr(0, comma), &used_a);
    b = std::stod(text.substr(comma + 1), &used_b);
  } catch (const std::exception&) {
    used_a = 0;
  }
  if (used_a != comma || used_b != text.size() - comma - 1)
    throw CLI::ValidationError(flag, "expected two comma-separated numbers, got '" + text + "'");
  return {a, b};
}

struct Options {
  RunConfig config;
  std::string at = "0,0";
  std::string dir = "1,0";
  double tol_check = 0.0;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--metric", o.config.metric, "funk:+, funk:-, bryant:<alpha>, euclid")->capture_default_str();
  cmd->add_option("--at", o.at, "base point x1,x2")->capture_default_str();
  cmd->add_option("--dir", o.dir, "fiber vector y1,y2")->capture_default_str();
  cmd->add_option("--grid", o.config.grid, "grid size (power of two >= 16)")->capture_default_str();
  cmd->add_option("--nmax", o.config.nmax, "Fourier truncation")->capture_default_str();
  cmd->add_option("--tol-ode", o.config.tol_ode, "ODE absolute and relative tolerance")->capture_default_str();
  cmd->add_option("--tol-check", o.tol_check, "check tolerance (default depends on the command)");
  cmd->add_option("--seed", o.config.seed, "seed for sampled checks")->capture_default_str();
  cmd->add_option("--out", o.config.out, "output directory")->capture_default_str();
  cmd->add_flag("--json", o.config.json, "print the JSON report instead of the summary");
  cmd->add_flag("--timing", o.config.timing, "include wall-clock durations in the report");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsler holonomy experiments"};
  app.require_subcommand(1);
  Options o;

  const std::map<std::string, std::pair<std::string, std::function<Report(const RunConfig&)>>> commands = {
      {"metric-info", {"F, P, g and spray at --at, --dir", cmd_metric_info}},
      {"curvature", {"flag curvature at seeded random points", cmd_curvature}},
      {"geodesic", {"geodesic from --at with velocity --dir (CSV t,x1,x2)", cmd_geodesic}},
      {"transport", {"parallel transport of --dir along --curve", cmd_transport}},
      {"loop", {"holonomy of --loop (CSV t, phi(t) - t)", cmd_loop}},
      {"algebra", {"bracket, Fourier and flow identities", cmd_algebra}},
      {"closure", {"bracket closure of the five Fourier generators", cmd_closure}},
      {"verify", {"theorem report plus the acceptance suite", cmd_verify}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    CLI::App* cmd = app.add_subcommand(name, entry.first);
    add_common(cmd, o);
    subs[name] = cmd;
  }
  subs["curvature"]->add_option("--points", o.config.points, "number of sample points")->capture_default_str();
  subs["geodesic"]->add_option("--time", o.config.time, "parameter length")->capture_default_str();
  subs["transport"]->add_option("--curve", o.config.curve, "square:x,y,s or polyline:x1,y1;x2,y2;...")
      ->capture_default_str();
  subs["loop"]->add_option("--loop", o.config.loop, "square:x,y,s or polyline:x1,y1;x2,y2;...")->capture_default_str();
  subs["closure"]->add_option("--depth", o.config.depth, "maximum bracket depth")->capture_default_str();
  subs["verify"]->add_option("--criterion", o.config.criteria, "run only these acceptance criteria (1-11)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    o.config.at = parse_pair(o.at, "--at");
    o.config.dir = parse_pair(o.dir, "--dir");
    if (o.tol_check != 0.0) o.config.tol_check = o.tol_check;

    for (const auto& [name, cmd] : subs) {
      if (!cmd->parsed()) continue;
      const auto t0 = std::chrono::steady_clock::now();
      Report report = commands.at(name).second(o.config);
      report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      const std::vector<std::string> files = write_outputs(report, o.config);
      if (o.config.json) {
        std::cout << report.to_json(o.config.timing).dump(2) << '\n';
      } else {
        std::cout << summary(report, o.config.timing);
        for (const std::string& f : files) std::cout << "  wrote " << f << '\n';
      }
      return report.pass() ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
