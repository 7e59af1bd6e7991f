#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "keepalive/cost.hpp"
#include "keepalive/errors.hpp"
#include "oracles.hpp"

using namespace keepalive;

namespace {
const HawkesParams kPoisson1{1.0, 0.0, 1.0};
const std::vector<double> kSingle{0.0};
}  // namespace

TEST(RealizedCost, KeepAliveWarm) {
  const auto r = realized_cost(5.0, WindowSchedule::keep_alive(10.0), {1.0, 10.0});
  EXPECT_EQ(r.cost, 5.0);
  EXPECT_FALSE(r.cold_start);
  EXPECT_EQ(r.cached_time, 5.0);
}

TEST(RealizedCost, KeepAliveExpired) {
  const auto r = realized_cost(15.0, WindowSchedule::keep_alive(10.0), {1.0, 10.0});
  EXPECT_EQ(r.cost, 20.0);
  EXPECT_TRUE(r.cold_start);
  EXPECT_EQ(r.cached_time, 10.0);
}

TEST(RealizedCost, ArrivalBeforePrewarm) {
  const auto r = realized_cost(3.0, WindowSchedule::prewarm(5.0, 10.0), {1.0, 10.0});
  EXPECT_EQ(r.cost, 10.0);
  EXPECT_TRUE(r.cold_start);
  EXPECT_EQ(r.cached_time, 0.0);
}

TEST(RealizedCost, MultiWindowAccumulates) {
  const WindowSchedule s({{0.0, 1.0}, {3.0, 5.0}});
  const auto r = realized_cost(4.0, s, {1.0, 2.0});
  EXPECT_EQ(r.cached_time, 2.0);
  EXPECT_EQ(r.cost, 2.0);
  EXPECT_FALSE(r.cold_start);
}

TEST(RealizedCost, EndpointsAreWarm) {
  const CostParams c{1.0, 4.0};
  EXPECT_FALSE(realized_cost(10.0, WindowSchedule::keep_alive(10.0), c).cold_start);
  EXPECT_FALSE(realized_cost(5.0, WindowSchedule::prewarm(5.0, 1.0), c).cold_start);
  EXPECT_TRUE(realized_cost(0.0, WindowSchedule::none(), c).cold_start);
}

TEST(RealizedCost, MatchesBranchOracle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::pair<double, double>> w;
    double t = 0.0;
    const int n = static_cast<int>(u(rng) * 4);
    for (int k = 0; k < n; ++k) {
      const double a = t + 3.0 * u(rng);
      const double b = a + 0.01 + 3.0 * u(rng);
      w.emplace_back(a, b);
      t = b + 0.01;
    }
    std::vector<Window> windows;
    for (auto [a, b] : w) windows.push_back({a, b});
    const CostParams c{0.5 + u(rng), 0.5 + 10.0 * u(rng)};
    const double x = 15.0 * u(rng);
    const auto got = realized_cost(x, WindowSchedule(windows), c);
    const auto want = oracle::realized(x, w, c);
    EXPECT_NEAR(got.cost, want.cost, 1e-12);
    EXPECT_EQ(got.cold_start, want.cold);
  }
}

TEST(InstantaneousCost, PoissonAtZero) {
  EXPECT_NEAR(instantaneous_cost_g(kPoisson1, kSingle, 0.0, {1.0, 2.0}), -1.0, 1e-15);
}

TEST(InstantaneousCost, SignFollowsHazardGap) {
  const HawkesParams p{0.02, 0.9, 1.2};
  const std::vector<double> h{0.0, 0.3, 0.31};
  const CostParams c{1.0, 5.0};
  for (double x = 0.0; x < 10.0; x += 0.05) {
    const double g = instantaneous_cost_g(p, h, x, c);
    const double d = c.keep - c.cold_start * hazard(p, h, x);
    if (std::abs(d) > 1e-12) {
      EXPECT_EQ(std::signbit(g), std::signbit(d)) << x;
    }
  }
}

TEST(InstantaneousCost, VanishesFarOut) {
  EXPECT_LT(std::abs(instantaneous_cost_g(kPoisson1, kSingle, 60.0, {1.0, 2.0})), 1e-25);
}

TEST(ExpectedCost, EmptyScheduleIsColdStartCost) {
  EXPECT_EQ(expected_cost({0.1, 0.5, 1.0}, kSingle, WindowSchedule::none(), {1.0, 7.0}), 7.0);
}

TEST(ExpectedCost, PoissonAlwaysOn) {
  EXPECT_NEAR(expected_cost(kPoisson1, kSingle, WindowSchedule::always(), {1.0, 3.0}), 1.0, 1e-8);
  EXPECT_NEAR(expected_cost({0.25, 0.0, 1.0}, kSingle, WindowSchedule::always(), {2.0, 3.0}), 8.0, 1e-7);
}

TEST(ExpectedCost, PoissonFiniteWindowClosedForm) {
  const double closed = 2.0 + (1.0 - 2.0) * (1.0 - std::exp(-1.0));
  const double got = expected_cost(kPoisson1, kSingle, WindowSchedule::keep_alive(1.0), {1.0, 2.0});
  EXPECT_NEAR(got, closed, 1e-12);
  EXPECT_NEAR(got, 1.36788, 5e-6);

  std::mt19937_64 rng(9);
  std::exponential_distribution<double> gap(1.0);
  const int n = 1'000'000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = oracle::realized(gap(rng), {{0.0, 1.0}}, {1.0, 2.0}).cost;
    sum += c;
    sq += c * c;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / n);
  EXPECT_NEAR(got, mean, 4.0 * se);
}

TEST(ExpectedCost, OptimalWindowBeatsPerturbations) {
  const HawkesParams p{0.01, 0.5, 1.0};
  const std::vector<double> h{0.0, 0.7, 1.0};
  const CostParams c{1.0, 10.0};
  const double tau = optimal_hawkes_window(p, h, c).length();
  const double best = expected_cost(p, h, WindowSchedule::keep_alive(tau), c);
  for (double f : {0.5, 0.9, 1.1, 2.0}) {
    EXPECT_LT(best, expected_cost(p, h, WindowSchedule::keep_alive(f * tau), c));
  }
  EXPECT_LT(best, expected_cost(p, h, WindowSchedule::prewarm(0.1, tau), c));
  EXPECT_LT(best, expected_cost(p, h, WindowSchedule::none(), c));
}

TEST(ExpectedCost, UnboundedWindowWithoutBackgroundFails) {
  EXPECT_THROW(expected_cost({0.0, 1.0, 1.0}, kSingle, WindowSchedule::always(), {1.0, 1.0}), NumericError);
  EXPECT_NO_THROW(expected_cost({0.0, 1.0, 1.0}, kSingle, WindowSchedule::keep_alive(5.0), {1.0, 1.0}));
}
