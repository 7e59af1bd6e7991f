#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "keepalive/cost.hpp"
#include "keepalive/estimation.hpp"
#include "keepalive/evaluator.hpp"
#include "keepalive/point_process.hpp"
#include "keepalive/policy.hpp"
#include "keepalive/trace.hpp"

namespace keepalive::io {

using nlohmann::json;

// Shortest form with at most 17 significant digits; parses back to the same double.
std::string format_double(double v);
// Finite numbers as numbers, +-inf as the strings "inf" / "-inf" (JSON has no infinity).
json number(double v);
double to_double(const json& j);

// One timestamp per line under a "t" header.
void write_timestamps(std::ostream& os, std::span<const double> times);
// Accepts an optional non-numeric header line, blank lines and a first CSV
// column.  Throws DataError naming the offending line.
std::vector<double> read_timestamps(std::istream& is, const std::string& source = "<stream>");
std::vector<double> read_timestamps(const std::filesystem::path& path);

json to_json(const HawkesParams& p);
json to_json(const CostParams& c);
json to_json(const FitResult& f);
json to_json(const GofResult& g);
json to_json(const ReplayMetrics& m, bool with_costs = false);
json to_json(const OptimalWindow& w);
json to_json(const WindowBounds& b);
json to_json(const CostCurve& c);
json to_json(const SavingsSummary& s);
json to_json(const PopulationCurves& p);
json to_json(const TraceExperimentResult& r);

HawkesParams params_from_json(const json& j);

// Canonical dataset JSON: {"days": [...], "apps": {id: {day: [t...]}}} with
// sorted keys, so equal datasets serialize to identical bytes.
json dataset_to_json(const TraceDataset& d);
TraceDataset dataset_from_json(const json& j);

void write_cost_curve_csv(std::ostream& os, const CostCurve& c);
// Columns: population, policy, c_cs, avg_cold_starts_per_app, normalized_wasted_memory, wasted_memory_time
void write_pareto_csv(std::ostream& os, const TraceExperimentResult& r);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace keepalive::io
