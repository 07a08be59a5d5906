#pragma once

#include "finsler/circle_field.hpp"
#include "finsler/circle_map.hpp"
#include "finsler/ode.hpp"
#include "finsler/spray.hpp"
#include "finsler/theorem.hpp"
#include "finsler/transport.hpp"

#include <json.hpp>

namespace finsler {

using Json = nlohmann::ordered_json;

Json to_json(const Vec2& v);
Json to_json(const Mat2& m);
/// {"nmax": K, "a0": v, "cos": [...], "sin": [...]}
Json to_json(const CircleVectorField& f);
Json to_json(const SolverStats& s);
Json to_json(const SprayData& s);
Json to_json(const CircleMap& phi);
Json to_json(const ClosureResult& r);
Json to_json(const SmallLoopReport& r);
Json to_json(const TheoremConditions& c);
Json to_json(const ReportEntry& e);
Json to_json(const SpanningCheck& s);
Json to_json(const TheoremFields& f);
Json to_json(const TheoremReport& r);

/// The comparison entries alone: [{name, expected, computed, sup_error, pass}, ...].
Json algebra_report(const std::vector<ReportEntry>& entries);

} // namespace finsler
