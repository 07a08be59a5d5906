#pragma once

#include "finsler/report_json.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace finsler {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;     // one-line summary of the measured quantities
  double seconds = 0.0;   // wall clock
  double time_limit = 0.0;  // 0 when the criterion has no runtime bound
  Json data;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240611;
  int grid = kDefaultGrid;
  int nmax = kDefaultNmax;
};

inline constexpr int kCriterionCount = 11;

/// Runs one criterion (1..11). A criterion with a runtime bound fails when it
/// exceeds the bound.
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});

/// Runs all criteria in order, calling `on_result` after each one.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// `with_timing` adds the wall-clock fields, which are not reproducible.
Json to_json(const CriterionResult& r, bool with_timing);

} // namespace finsler
