#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "keepalive/cost.hpp"
#include "keepalive/estimation.hpp"
#include "keepalive/point_process.hpp"
#include "keepalive/policy.hpp"
#include "keepalive/trace.hpp"

namespace keepalive {

namespace policies {
struct FixedTtl {
  double ttl = 10.0;
};
struct PrewarmTtl {
  double prewarm = 0.0;
  double ttl = 0.0;
};
struct MultiWindow {
  WindowSchedule schedule;
};
// History-dependent optimum recomputed after every arrival.
struct OptimalHawkes {
  std::size_t truncation = kDefaultTruncation;
};
// History-independent window computed beforehand (see optimized_ttl).
struct OptimizedTtl {
  double ttl = 0.0;
};
// tau_approx from the process parameters.
struct Approx {};
// Clairvoyant min(c_cs, c_p x) per inter-arrival.
struct OfflineOptimal {};
}  // namespace policies

using PolicySpec =
    std::variant<policies::FixedTtl, policies::PrewarmTtl, policies::MultiWindow,
                 policies::OptimalHawkes, policies::OptimizedTtl, policies::Approx,
                 policies::OfflineOptimal>;

std::string policy_name(const PolicySpec& policy);
bool needs_params(const PolicySpec& policy);

struct ReplayMetrics {
  std::size_t arrivals = 0;
  std::size_t cold_starts = 0;          // includes the first arrival
  double wasted_memory_time = 0.0;      // cached time that ended without a hit, plus trailing
  double warm_time_before_hits = 0.0;   // cached time that ended in a hit
  double trailing_waste = 0.0;          // part of the waste after the last arrival
  std::vector<double> per_interarrival_costs;
  double total_cost = 0.0;  // c_cs (first arrival) + sum(per_interarrival) + c_p * trailing

  double mean_interarrival_cost() const;
};

struct ReplayOptions {
  // End of the observation window (day end).  Cached time scheduled after
  // the last arrival is counted as waste up to this point.
  std::optional<double> horizon;
};

// Walks the inter-arrivals of one application under `policy`.  Throws
// ConfigError when a history-dependent policy has no parameters.
ReplayMetrics replay(std::span<const double> arrivals, const PolicySpec& policy,
                     const CostParams& costs, const std::optional<HawkesParams>& params = std::nullopt,
                     const ReplayOptions& opts = {});

// ---------------------------------------------------------------------------
// Monte-Carlo cost curves on simulated Hawkes arrivals.

struct CostCurveOptions {
  std::vector<double> ttl_grid;  // empty: linspace(0, 2 c_cs/c_p, grid_points)
  std::size_t grid_points = 50;
  std::size_t events = 600;
  std::size_t realizations = 100;
  std::uint64_t seed = 0;
  std::size_t truncation = kDefaultTruncation;
  // Realizations used to compute the optimized TTL (separate seeds).
  std::size_t ttl_realizations = 1;
  unsigned threads = 1;
};

struct CostCurve {
  HawkesParams params;
  CostParams costs;
  std::vector<double> ttl_grid;
  std::vector<double> fixed_mean_cost;  // per grid point
  double optimal_mean_cost = 0.0;
  double optimized_ttl = 0.0;
  double optimized_ttl_mean_cost = 0.0;
  double tau_fixed = 0.0;
  double tau_fixed_mean_cost = 0.0;
  double tau_approx = 0.0;
  double tau_approx_mean_cost = 0.0;
  double offline_mean_cost = 0.0;
  std::size_t events = 0;
  std::size_t realizations = 0;
  std::uint64_t seed = 0;

  double min_fixed_mean_cost() const;
};

CostCurve cost_curve_experiment(const HawkesParams& params, const CostParams& costs,
                                const CostCurveOptions& opts = {});

// ---------------------------------------------------------------------------
// Trace protocol: fit on one day, rank by goodness of fit on another, treat
// the best fraction and evaluate on a third.

struct ParetoPoint {
  double cold_start_cost = 0.0;            // c_cs of this grid point
  double avg_cold_starts_per_app = 0.0;
  double normalized_wasted_memory = 0.0;   // / waste of the default 10-minute policy
  double wasted_memory_time = 0.0;         // unnormalized total
};

using ParetoCurve = std::vector<ParetoPoint>;

struct SavingsSummary {
  double avg_cold_start_savings = 0.0;  // area / larger normalized-memory extent
  double avg_memory_savings = 0.0;      // area / larger cold-start extent
  double area = 0.0;
  bool curves_cross = false;
  std::string warning;
};

// Trapezoidal area between a baseline curve and another over their common
// cold-start range (positive when `other` lies below), divided by the larger
// extent of the two curves on each axis.
SavingsSummary savings(const ParetoCurve& fixed_curve, const ParetoCurve& other_curve);

// True when every point of `b` is matched or beaten by the piecewise-linear
// curve through `a`: some point of it has no more cold starts and no more
// memory (within tol).  Points of `b` left of a's cold-start range are skipped.
bool weakly_pareto_dominates(const ParetoCurve& a, const ParetoCurve& b, double tol = 1e-12);

enum class UntreatedPolicy {
  MatchedFixed,  // fixed window c_cs/c_p at each grid point
  Default,       // the default 10-minute window throughout
};

struct TraceExperimentConfig {
  int fit_day = 8;
  int gof_day = 7;
  int eval_day = 9;
  std::vector<double> ccs_grid{5, 10, 20, 30, 45, 60, 90, 120};
  double keep_cost = 1.0;
  double treat_fraction = 0.25;
  double default_ttl = 10.0;
  std::size_t truncation = kDefaultTruncation;
  double optimized_ttl_horizon = kMinutesPerDay;
  UntreatedPolicy untreated = UntreatedPolicy::MatchedFixed;
  FitOptions fit;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct AppAssessment {
  std::string id;
  std::size_t fit_arrivals = 0;
  std::size_t gof_arrivals = 0;
  std::size_t eval_arrivals = 0;
  std::optional<FitResult> fit;
  std::optional<GofResult> gof;
  bool treated = false;
  std::string excluded_reason;  // empty when eligible
};

inline const std::vector<std::string> kTracePolicies{"fixed", "optimal", "optimized-ttl", "approx",
                                                     "offline-optimal"};

struct PopulationCurves {
  std::size_t apps = 0;
  double default_waste = 0.0;  // normalization divisor
  std::map<std::string, ParetoCurve> curves;          // keyed by policy name
  std::map<std::string, SavingsSummary> savings;      // vs "fixed"
};

struct TraceExperimentResult {
  std::vector<AppAssessment> apps;  // every app with arrivals on the eval day
  PopulationCurves treated;
  PopulationCurves all;
  std::vector<std::string> log;
};

TraceExperimentResult trace_experiment(const TraceDataset& dataset,
                                       const TraceExperimentConfig& config = {});

}  // namespace keepalive
