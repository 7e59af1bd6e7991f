#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "keepalive/errors.hpp"
#include "keepalive/evaluator.hpp"
#include "oracles.hpp"

using namespace keepalive;

namespace {

const std::vector<double> kArrivals{0.0, 5.0, 20.0};

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

ParetoCurve curve(std::initializer_list<std::pair<double, double>> pts) {
  ParetoCurve c;
  for (auto [x, y] : pts) c.push_back({0.0, x, y, y});
  return c;
}

}  // namespace

TEST(Replay, FixedTenMinuteWindow) {
  const CostParams c{1.0, 10.0};
  const auto m = replay(kArrivals, policies::FixedTtl{10.0}, c);
  EXPECT_EQ(m.cold_starts, 2u);
  EXPECT_EQ(m.wasted_memory_time, 10.0);
  EXPECT_EQ(m.warm_time_before_hits, 5.0);
  EXPECT_EQ(m.per_interarrival_costs, (std::vector<double>{5.0, 20.0}));
}

TEST(Replay, TrailingWindowCountsAsWaste) {
  const auto m = replay(kArrivals, policies::FixedTtl{10.0}, {1.0, 10.0}, std::nullopt, {.horizon = 25.0});
  EXPECT_EQ(m.trailing_waste, 5.0);
  EXPECT_EQ(m.wasted_memory_time, 15.0);
  EXPECT_EQ(m.total_cost, 10.0 + 25.0 + 5.0);
}

TEST(Replay, OfflineOptimalPaysMinimum) {
  const CostParams c{1.0, 10.0};
  const auto m = replay(kArrivals, policies::OfflineOptimal{}, c);
  EXPECT_EQ(m.per_interarrival_costs, (std::vector<double>{5.0, 10.0}));
  EXPECT_EQ(m.cold_starts, 2u);
  EXPECT_EQ(m.wasted_memory_time, 0.0);
}

TEST(Replay, ZeroWindowIsAlwaysCold) {
  const auto m = replay(kArrivals, policies::FixedTtl{0.0}, {1.0, 3.0}, std::nullopt, {.horizon = 1440.0});
  EXPECT_EQ(m.cold_starts, kArrivals.size());
  EXPECT_EQ(m.wasted_memory_time, 0.0);
}

TEST(Replay, AccountingIdentity) {
  SimConfig cfg;
  cfg.seed = 4;
  cfg.stop = EventCount{400};
  const HawkesParams p{0.05, 0.7, 1.0};
  const History h = simulate(p, cfg);
  const CostParams c{1.0, 15.0};
  const std::vector<PolicySpec> all{policies::FixedTtl{7.0},
                                    policies::PrewarmTtl{0.5, 3.0},
                                    policies::MultiWindow{WindowSchedule({{0.0, 1.0}, {4.0, 9.0}})},
                                    policies::OptimalHawkes{},
                                    policies::OptimizedTtl{2.0},
                                    policies::Approx{},
                                    policies::OfflineOptimal{}};
  for (const auto& pol : all) {
    const auto m = replay(h, pol, c, p);
    const double rhs = c.keep * (m.warm_time_before_hits + m.wasted_memory_time) +
                       c.cold_start * static_cast<double>(m.cold_starts - 1);
    EXPECT_NEAR(sum(m.per_interarrival_costs), rhs, 1e-9 * rhs) << policy_name(pol);
  }
}

TEST(Replay, OptimalRecomputesPerArrival) {
  const HawkesParams p{0.01, 0.5, 1.0};
  const CostParams c{1.0, 10.0};
  const std::vector<double> h{0.0, 0.5, 3.0, 3.1};
  const auto m = replay(h, policies::OptimalHawkes{}, c, p);
  for (std::size_t i = 1; i < h.size(); ++i) {
    const double tau = oracle::bisect_window(p, std::span<const double>(h).first(i), c);
    const double gap = h[i] - h[i - 1];
    EXPECT_NEAR(m.per_interarrival_costs[i - 1], oracle::realized(gap, {{0.0, tau}}, c).cost, 1e-8);
  }
}

TEST(Replay, OfflineNeverWorsePerInterArrival) {
  SimConfig cfg;
  cfg.seed = 8;
  cfg.stop = EventCount{300};
  const HawkesParams p{0.02, 0.6, 0.9};
  const History h = simulate(p, cfg);
  const CostParams c{1.0, 20.0};
  const auto off = replay(h, policies::OfflineOptimal{}, c);
  for (const PolicySpec& pol : {PolicySpec{policies::FixedTtl{5.0}}, PolicySpec{policies::OptimalHawkes{}}}) {
    const auto m = replay(h, pol, c, p);
    for (std::size_t i = 0; i < m.per_interarrival_costs.size(); ++i) {
      ASSERT_LE(off.per_interarrival_costs[i], m.per_interarrival_costs[i] + 1e-12);
    }
  }
}

TEST(Replay, Errors) {
  EXPECT_THROW(replay(kArrivals, policies::OptimalHawkes{}, {1.0, 1.0}), ConfigError);
  EXPECT_THROW(replay(kArrivals, policies::Approx{}, {1.0, 1.0}), ConfigError);
  EXPECT_THROW(replay(std::vector<double>{2.0, 1.0}, policies::FixedTtl{}, {1.0, 1.0}), DataError);
  EXPECT_EQ(replay(std::vector<double>{}, policies::FixedTtl{}, {1.0, 1.0}).cold_starts, 0u);
}

TEST(Savings, IdenticalCurves) {
  const auto a = curve({{1.0, 1.0}, {2.0, 0.5}, {3.0, 0.2}});
  const auto s = savings(a, a);
  EXPECT_EQ(s.avg_memory_savings, 0.0);
  EXPECT_EQ(s.avg_cold_start_savings, 0.0);
  EXPECT_FALSE(s.curves_cross);
}

TEST(Savings, UniformShift) {
  const auto a = curve({{1.0, 1.0}, {2.0, 0.7}, {4.0, 0.6}});
  const auto b = curve({{1.0, 0.8}, {2.0, 0.5}, {4.0, 0.4}});
  EXPECT_NEAR(savings(a, b).avg_memory_savings, 0.2, 1e-15);
}

TEST(Savings, HandTrapezoid) {
  // Differences 0.3, 0.1, 0.2 at x = 0, 1, 3.
  const auto a = curve({{0.0, 1.0}, {1.0, 0.6}, {3.0, 0.4}});
  const auto b = curve({{0.0, 0.7}, {1.0, 0.5}, {3.0, 0.2}});
  const double area = 0.5 * (0.3 + 0.1) * 1.0 + 0.5 * (0.1 + 0.2) * 2.0;
  const auto s = savings(a, b);
  EXPECT_NEAR(s.area, area, 1e-15);
  EXPECT_NEAR(s.avg_memory_savings, area / 3.0, 1e-15);
  EXPECT_NEAR(s.avg_cold_start_savings, area / 0.6, 1e-15);
}

TEST(Savings, UnsortedInputAndMisalignedGrids) {
  const auto a = curve({{3.0, 0.0}, {1.0, 2.0}});
  const auto b = curve({{2.0, 0.5}});
  EXPECT_NE(savings(a, b).warning, "");
  const auto c = curve({{1.0, 1.5}, {2.0, 0.5}, {3.0, 0.0}});
  // Differences 0.5, 0.5, 0 at x = 1, 2, 3.
  EXPECT_NEAR(savings(a, c).area, 0.5 * 1.0 + 0.25 * 1.0, 1e-15);
}

TEST(Savings, CrossingCurvesWarn) {
  const auto a = curve({{0.0, 1.0}, {2.0, 0.0}});
  const auto b = curve({{0.0, 0.5}, {2.0, 0.5}});
  const auto s = savings(a, b);
  EXPECT_TRUE(s.curves_cross);
  EXPECT_NEAR(s.area, 0.0, 1e-15);
  EXPECT_FALSE(s.warning.empty());
}

TEST(Dominance, WeakParetoCheck) {
  const auto fixed = curve({{1.0, 1.0}, {2.0, 0.6}});
  const auto better = curve({{1.0, 0.8}, {1.8, 0.5}});
  EXPECT_TRUE(weakly_pareto_dominates(better, fixed));
  EXPECT_FALSE(weakly_pareto_dominates(fixed, better));
  EXPECT_TRUE(weakly_pareto_dominates(fixed, fixed));
  // Reaching further along the cold-start axis is not a loss.
  const auto wider = curve({{0.5, 0.9}, {1.5, 0.55}, {5.0, 0.7}});
  EXPECT_TRUE(weakly_pareto_dominates(wider, fixed));
  // A point beneath the straight line between two of a's points is not covered.
  EXPECT_FALSE(weakly_pareto_dominates(fixed, curve({{1.5, 0.75}})));
  EXPECT_TRUE(weakly_pareto_dominates(fixed, curve({{1.5, 0.85}})));
  EXPECT_FALSE(weakly_pareto_dominates(fixed, curve({{1.2, 0.5}, {3.0, 0.1}})));
  // Left of a's range there is nothing to compare against.
  EXPECT_TRUE(weakly_pareto_dominates(fixed, curve({{0.5, 0.0}})));
}

TEST(CostCurve, ShapeAndDeterminism) {
  CostCurveOptions o;
  o.events = 200;
  o.realizations = 4;
  o.grid_points = 6;
  o.seed = 3;
  const HawkesParams p{0.01, 0.5, 1.0};
  const CostParams c{1.0, 10.0};
  const CostCurve a = cost_curve_experiment(p, c, o);
  ASSERT_EQ(a.ttl_grid.size(), 6u);
  EXPECT_EQ(a.ttl_grid.front(), 0.0);
  EXPECT_NEAR(a.ttl_grid.back(), 20.0, 1e-12);
  EXPECT_NEAR(a.fixed_mean_cost.front(), 10.0, 1e-12);  // zero window: every gap is a cold start
  EXPECT_LE(a.offline_mean_cost, a.optimal_mean_cost);
  EXPECT_LE(a.offline_mean_cost, a.min_fixed_mean_cost());
  o.threads = 3;
  const CostCurve b = cost_curve_experiment(p, c, o);
  EXPECT_EQ(a.fixed_mean_cost, b.fixed_mean_cost);
  EXPECT_EQ(a.optimal_mean_cost, b.optimal_mean_cost);
}

TEST(TraceExperiment, SmallSyntheticPopulation) {
  const auto apps = synth_population(24, 5);
  const TraceDataset d = synth_trace(apps, {7, 8, 9}, 5);
  TraceExperimentConfig cfg;
  cfg.ccs_grid = {5, 30, 120};
  cfg.treat_fraction = 0.5;
  const auto r = trace_experiment(d, cfg);
  std::size_t treated = 0;
  for (const auto& a : r.apps) treated += a.treated;
  EXPECT_EQ(treated, r.treated.apps);
  EXPECT_EQ(r.all.apps, r.apps.size());
  for (const auto& name : kTracePolicies) {
    ASSERT_EQ(r.treated.curves.at(name).size(), 3u) << name;
    EXPECT_TRUE(weakly_pareto_dominates(r.all.curves.at("offline-optimal"), r.all.curves.at(name))) << name;
  }
  // Larger cold-start cost: fewer cold starts on the fixed curve.  Waste only
  // counts windows that expire unused, so it need not grow with the TTL.
  const auto& fixed = r.all.curves.at("fixed");
  for (std::size_t i = 1; i < fixed.size(); ++i) {
    EXPECT_LE(fixed[i].avg_cold_starts_per_app, fixed[i - 1].avg_cold_starts_per_app);
  }
  cfg.threads = 4;
  const auto r2 = trace_experiment(d, cfg);
  EXPECT_EQ(r2.all.curves.at("optimal")[1].wasted_memory_time, r.all.curves.at("optimal")[1].wasted_memory_time);
}

TEST(TraceExperiment, ExcludesSparseApps) {
  TraceDataset d;
  d.days = {7, 8, 9};
  d.apps["sparse"][7] = History({1.0});
  d.apps["sparse"][8] = History({1.0, 2.0});
  d.apps["sparse"][9] = History({1.0, 50.0});
  const auto r = trace_experiment(d, {});
  ASSERT_EQ(r.apps.size(), 1u);
  EXPECT_FALSE(r.apps[0].treated);
  EXPECT_FALSE(r.apps[0].excluded_reason.empty());
  EXPECT_THROW(trace_experiment(TraceDataset{}, {}), DataError);
}
