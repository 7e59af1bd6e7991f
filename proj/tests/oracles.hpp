#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's closed forms.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "keepalive/point_process.hpp"
#include "keepalive/policy.hpp"

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// lambda(x | H) from the definition over the most recent `truncation` arrivals.
inline double hazard(const keepalive::HawkesParams& p, std::span<const double> h, double x,
                     std::size_t truncation = 200) {
  const std::size_t first = h.size() > truncation ? h.size() - truncation : 0;
  const double t = h.back() + x;
  double s = 0.0;
  for (std::size_t j = first; j < h.size(); ++j) s += std::exp(-p.beta * (t - h[j]));
  return p.lambda0 + p.alpha * s;
}

// Root of c_p - c_cs * lambda(x) = 0 by bisection.  Returns 0 when the
// hazard already sits below c_p/c_cs at the arrival, +inf when it never does.
inline double bisect_window(const keepalive::HawkesParams& p, std::span<const double> h,
                            const keepalive::CostParams& c, std::size_t truncation = 200) {
  const double r = c.keep / c.cold_start;
  if (r <= p.lambda0) return kInf;
  auto g = [&](double x) { return r - hazard(p, h, x, truncation); };
  if (g(0.0) >= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0 / p.beta;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Eq. (1) cost of one inter-arrival, written out branch by branch.
struct Outcome {
  double cost;
  bool cold;
};
inline Outcome realized(double x, const std::vector<std::pair<double, double>>& windows,
                        const keepalive::CostParams& c) {
  double cached = 0.0;
  for (const auto& [a, b] : windows) {
    if (x < a) break;
    if (x <= b) return {c.keep * (cached + (x - a)), false};
    cached += b - a;
  }
  return {c.keep * cached + c.cold_start, true};
}

}  // namespace oracle
