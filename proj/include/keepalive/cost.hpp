#pragma once

#include <span>

#include "keepalive/point_process.hpp"
#include "keepalive/policy.hpp"

namespace keepalive {

struct RealizedOutcome {
  double cost = 0.0;
  bool cold_start = false;
  double cached_time = 0.0;  // memory-time paid before the arrival
};

// Cost of one inter-arrival of length `gap` under `schedule`.  Window
// endpoints are inclusive: an arrival exactly at an endpoint is warm.
// Every window wholly before the arrival is paid in full.
RealizedOutcome realized_cost(double gap, const WindowSchedule& schedule, const CostParams& costs);

// g(x | H) = c_p (1 - F(x)) - c_cs f(x) = survival(x) * (c_p - c_cs * hazard(x)).
double instantaneous_cost_g(const HawkesParams& params, std::span<const double> history, double x,
                            const CostParams& costs);

struct ExpectedCostOptions {
  // Unbounded windows are integrated up to the point where survival drops below this.
  double survival_floor = 1e-10;
  // Absolute error budget as a multiple of c_cs.
  double relative_tolerance = 1e-8;
};

// c_cs + integral of g over the schedule's windows, by adaptive Gauss-Kronrod.
// Throws NumericError when the quadrature cannot meet its tolerance or an
// unbounded window has non-vanishing survival.
double expected_cost(const HawkesParams& params, std::span<const double> history,
                     const WindowSchedule& schedule, const CostParams& costs,
                     const ExpectedCostOptions& opts = {});

}  // namespace keepalive
