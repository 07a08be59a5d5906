#pragma once

#include "finsler/report_json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace finsler::cli {

struct RunConfig {
  std::string metric = "funk:+";
  Vec2 at = Vec2::Zero();
  Vec2 dir = Vec2(1.0, 0.0);
  int grid = kDefaultGrid;
  int nmax = kDefaultNmax;
  double tol_ode = 1e-10;
  std::optional<double> tol_check;  // each command has its own default
  std::uint64_t seed = 20240611;
  std::string out = "results";
  bool json = false;
  bool timing = false;

  std::string loop = "square:0,0,0.2";
  std::string curve = "polyline:0,0;0.3,0;0.3,0.3";
  double time = 2.0;    // geodesic length in parameter time
  int points = 20;      // curvature sample count
  int depth = 8;        // closure depth
  std::vector<int> criteria;  // verify: subset of acceptance criteria, empty for all
};

/// Throws std::invalid_argument on bad tolerances or grid sizes.
void validate(const RunConfig& config);

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string command;
  Json config;
  Json results;
  std::vector<Check> checks;
  std::vector<std::string> highlights;  // terminal summary lines
  double seconds = 0.0;
  std::optional<CsvTable> csv;

  bool pass() const;
  Json to_json(bool with_timing) const;
};

Report cmd_metric_info(const RunConfig& config);
Report cmd_curvature(const RunConfig& config);
Report cmd_geodesic(const RunConfig& config);
Report cmd_transport(const RunConfig& config);
Report cmd_loop(const RunConfig& config);
Report cmd_algebra(const RunConfig& config);
Report cmd_closure(const RunConfig& config);
Report cmd_verify(const RunConfig& config);

/// Writes <out>/<command>-<timestamp>.json and, when present, the .csv next to it.
/// Returns the paths written.
std::vector<std::string> write_outputs(const Report& report, const RunConfig& config);

/// Human-readable summary for the terminal.
std::string summary(const Report& report, bool with_timing);

} // namespace finsler::cli
