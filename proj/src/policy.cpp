#include "keepalive/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "keepalive/errors.hpp"

namespace keepalive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_j exp(beta (t_j - t_last)) over the `truncation` most recent arrivals.
// Every exponent is <= 0, so the sum lies in [1, truncation].
double recent_weight(double beta, std::span<const double> history, std::size_t truncation) {
  const std::size_t n = history.size();
  const std::size_t first = n > truncation ? n - truncation : 0;
  const double last = history.back();
  double sum = 0.0;
  for (std::size_t j = n; j-- > first;) sum += std::exp(beta * (history[j] - last));
  return sum;
}

void require_sorted(std::span<const double> history, const char* what) {
  if (!std::is_sorted(history.begin(), history.end())) {
    throw DomainError(std::string(what) + ": history must be sorted");
  }
}

}  // namespace

void CostParams::validate() const {
  if (!(keep > 0.0) || !std::isfinite(keep)) throw DomainError("CostParams: c_p must be > 0");
  if (!(cold_start > 0.0) || !std::isfinite(cold_start)) {
    throw DomainError("CostParams: c_cs must be > 0");
  }
}

WindowSchedule::WindowSchedule(std::vector<Window> windows) : windows_(std::move(windows)) {
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    const Window& w = windows_[i];
    if (std::isnan(w.start) || std::isnan(w.end) || !(w.start >= 0.0) || !(w.start < w.end) ||
        std::isinf(w.start)) {
      throw DomainError("WindowSchedule: window " + std::to_string(i) +
                        " must satisfy 0 <= start < end");
    }
    if (i > 0 && !(w.start > windows_[i - 1].end)) {
      throw DomainError("WindowSchedule: windows must be sorted and disjoint");
    }
    if (std::isinf(w.end) && i + 1 != windows_.size()) {
      throw DomainError("WindowSchedule: only the last window may be unbounded");
    }
  }
}

WindowSchedule WindowSchedule::keep_alive(double ttl) { return prewarm(0.0, ttl); }

WindowSchedule WindowSchedule::prewarm(double delay, double ttl) {
  if (std::isnan(ttl) || ttl < 0.0) throw DomainError("WindowSchedule: negative keep-alive");
  if (ttl == 0.0) return {};
  return WindowSchedule({Window{delay, delay + ttl}});
}

double WindowSchedule::total_length() const {
  double total = 0.0;
  for (const Window& w : windows_) total += w.length();
  return total;
}

OptimalWindow OptimalWindow::finite(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw DomainError("OptimalWindow: finite window must be positive");
  }
  return OptimalWindow(Kind::Finite, tau);
}

WindowSchedule OptimalWindow::schedule() const {
  switch (kind_) {
    case Kind::Zero: return WindowSchedule::none();
    case Kind::Finite: return WindowSchedule::keep_alive(tau_);
    case Kind::Infinite: return WindowSchedule::always();
  }
  return {};
}

const char* to_string(OptimalWindow::Kind kind) {
  switch (kind) {
    case OptimalWindow::Kind::Zero: return "Zero";
    case OptimalWindow::Kind::Finite: return "Finite";
    case OptimalWindow::Kind::Infinite: return "Infinite";
  }
  return "?";
}

OptimalWindow optimal_hawkes_window(const HawkesParams& params, std::span<const double> history,
                                    const CostParams& costs, std::size_t truncation) {
  params.validate();
  costs.validate();
  if (history.empty()) {
    throw DomainError("optimal_hawkes_window: empty history (use empty_history_window)");
  }
  if (truncation < 1) throw DomainError("optimal_hawkes_window: truncation must be >= 1");

  const double ratio = costs.ratio();
  // Equality keeps the window open: the marginal expected cost is zero.
  if (ratio <= params.lambda0) return OptimalWindow::infinite();
  if (params.alpha == 0.0) return OptimalWindow::zero();

  const double weight = recent_weight(params.beta, history, truncation);
  const double tau =
      (std::log(params.alpha) + std::log(weight) - std::log(ratio - params.lambda0)) / params.beta;
  if (!(tau > 0.0)) return OptimalWindow::zero();
  return OptimalWindow::finite(tau);
}

OptimalWindow empty_history_window(const HawkesParams& params, const CostParams& costs) {
  params.validate();
  costs.validate();
  const double ratio = costs.ratio();
  if (ratio <= params.lambda0) return OptimalWindow::infinite();
  if (params.alpha == 0.0) return OptimalWindow::zero();
  const double tau = (std::log(params.alpha) - std::log(ratio - params.lambda0)) / params.beta;
  if (!(tau > 0.0)) return OptimalWindow::zero();
  return OptimalWindow::finite(tau);
}

WindowSchedule windows_from_hazard(const std::function<double(double)>& hazard,
                                   const CostParams& costs, const HazardScanOptions& opts) {
  costs.validate();
  if (!(opts.horizon > 0.0) || !std::isfinite(opts.horizon)) {
    throw DomainError("windows_from_hazard: horizon must be positive and finite");
  }
  const double step = opts.resolution > 0.0 ? opts.resolution : opts.horizon / 1e4;
  const double tol = opts.tolerance > 0.0 ? opts.tolerance : 1e-9;

  auto g = [&](double x) {
    const double h = hazard(x);
    if (!std::isfinite(h)) {
      throw DomainError("windows_from_hazard: non-finite hazard at x = " + std::to_string(x));
    }
    return costs.keep - costs.cold_start * h;
  };
  // A zero of g keeps the previous state, so tangential touches open or close nothing.
  auto next_state = [](double gx, bool prev) { return gx < 0.0 ? true : gx > 0.0 ? false : prev; };

  // First x in (lo, hi] where g has the sign that ends the current state.
  auto refine = [&](double lo, double hi, bool opening) {
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const double gm = g(mid);
      const bool flipped = opening ? gm < 0.0 : gm > 0.0;
      if (flipped) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<Window> windows;
  bool open = next_state(g(0.0), true);
  double start = 0.0;
  const auto steps = static_cast<std::size_t>(std::ceil(opts.horizon / step));
  double prev_x = 0.0;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double x = std::min(opts.horizon, static_cast<double>(i) * step);
    const bool state = next_state(g(x), open);
    if (state != open) {
      const double boundary = refine(prev_x, x, state);
      if (state) {
        start = boundary;
      } else if (boundary > start) {
        windows.push_back({start, boundary});
      }
      open = state;
    }
    prev_x = x;
  }
  if (open) windows.push_back({start, kInf});
  return WindowSchedule(std::move(windows));
}

double optimized_ttl_from(const HawkesParams& params, std::span<const double> arrivals,
                          const CostParams& costs, std::size_t truncation) {
  if (arrivals.size() < 2) {
    throw DataError("optimized_ttl: need at least 2 arrivals, got " +
                    std::to_string(arrivals.size()));
  }
  require_sorted(arrivals, "optimized_ttl");
  double sum = 0.0;
  for (std::size_t i = 1; i <= arrivals.size(); ++i) {
    const OptimalWindow w = optimal_hawkes_window(params, arrivals.first(i), costs, truncation);
    if (w.is_infinite()) return kInf;
    sum += w.length();
  }
  return sum / static_cast<double>(arrivals.size());
}

double optimized_ttl(const HawkesParams& params, const CostParams& costs,
                     const OptimizedTtlOptions& opts) {
  params.validate();
  costs.validate();
  if (opts.realizations < 1) throw DomainError("optimized_ttl: realizations must be >= 1");
  // Every per-history window is Infinite in this regime; no need to simulate.
  if (costs.ratio() <= params.lambda0) return kInf;

  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < opts.realizations; ++r) {
    SimConfig sim = opts.sim;
    sim.seed = opts.sim.seed + r;
    const History h = simulate(params, sim);
    if (h.size() < 2) {
      throw DataError("optimized_ttl: simulation produced " + std::to_string(h.size()) +
                      " arrivals (need >= 2)");
    }
    sum += optimized_ttl_from(params, h.times(), costs, opts.truncation) *
           static_cast<double>(h.size());
    count += h.size();
  }
  return sum / static_cast<double>(count);
}

WindowBounds window_bounds(const HawkesParams& params, std::span<const double> history,
                           const CostParams& costs) {
  params.validate();
  costs.validate();
  if (history.empty()) throw DomainError("window_bounds: empty history");
  require_sorted(history, "window_bounds");
  const double excess = costs.ratio() - params.lambda0;
  if (!(excess > 0.0)) {
    throw DomainError("window_bounds: requires c_p/c_cs > lambda0 (finite-window regime)");
  }

  const double last = history.back();
  std::vector<double> weights;
  weights.reserve(history.size());
  for (std::size_t j = history.size(); j-- > 0;) {
    weights.push_back(std::exp(params.beta * (history[j] - last)));
  }
  double total = 0.0;
  for (double w : weights) total += w;
  WindowBounds out;
  double partial = 0.0;
  for (std::size_t d = 0; d < weights.size(); ++d) {
    partial += weights[d];
    if (partial >= 0.5 * total) {
      out.delta = d + 1;
      break;
    }
  }

  if (params.alpha == 0.0) return out;  // optimum is Zero; bounds collapse to [0, 0]
  const double base = (std::log(params.alpha) - std::log(excess)) / params.beta;
  out.lower = std::max(0.0, base);
  out.upper = std::max(out.lower, base + (std::log(static_cast<double>(out.delta)) + 1.0) /
                                             params.beta);
  return out;
}

double tau_fixed(const CostParams& costs) {
  costs.validate();
  return costs.cold_start / costs.keep;
}

double tau_approx(const HawkesParams& params, const CostParams& costs) {
  const OptimalWindow empty = empty_history_window(params, costs);
  if (empty.is_infinite()) return kInf;
  const double k = costs.cold_start / costs.keep;
  return std::sqrt(k * (empty.length() + k));
}

double tau_approx_ratio_bound(const HawkesParams& params, const CostParams& costs) {
  const OptimalWindow empty = empty_history_window(params, costs);
  if (empty.is_infinite()) return 1.0;
  return 1.0 + std::sqrt(1.0 / (costs.ratio() * empty.length() + 1.0));
}

bool offline_prefers_cold_start(double gap, const CostParams& costs) {
  if (!(gap >= 0.0)) throw DomainError("offline_optimal_cost: gap must be >= 0");
  return costs.keep * gap >= costs.cold_start;
}

double offline_optimal_cost(double gap, const CostParams& costs) {
  costs.validate();
  return offline_prefers_cold_start(gap, costs) ? costs.cold_start : costs.keep * gap;
}

}  // namespace keepalive
