#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "keepalive/point_process.hpp"

namespace keepalive {

inline constexpr std::size_t kDefaultTruncation = 200;

struct CostParams {
  double keep = 1.0;        // c_p, cost per unit of cached time
  double cold_start = 1.0;  // c_cs, cost per cold start

  void validate() const;
  double ratio() const { return keep / cold_start; }  // c_p / c_cs
};

// Closed interval of elapsed time since the most recent arrival.
struct Window {
  double start = 0.0;
  double end = 0.0;  // may be +inf for the last window only

  double length() const { return end - start; }
  friend bool operator==(const Window&, const Window&) = default;
};

// Keep-alive schedule over one inter-arrival: disjoint, sorted windows.
class WindowSchedule {
 public:
  WindowSchedule() = default;
  // Throws DomainError on overlapping, unsorted, negative or empty windows.
  explicit WindowSchedule(std::vector<Window> windows);

  static WindowSchedule none() { return {}; }
  static WindowSchedule keep_alive(double ttl);                // [0, ttl]
  static WindowSchedule prewarm(double delay, double ttl);     // [delay, delay + ttl]
  static WindowSchedule always() { return keep_alive(std::numeric_limits<double>::infinity()); }

  std::span<const Window> windows() const { return windows_; }
  bool empty() const { return windows_.empty(); }
  std::size_t size() const { return windows_.size(); }
  // Total cached time of all windows (may be +inf).
  double total_length() const;

  friend bool operator==(const WindowSchedule&, const WindowSchedule&) = default;

 private:
  std::vector<Window> windows_;
};

// Corollary-3 style optimum: a single window starting at the arrival.
class OptimalWindow {
 public:
  enum class Kind { Zero, Finite, Infinite };

  static OptimalWindow zero() { return OptimalWindow(Kind::Zero, 0.0); }
  static OptimalWindow infinite() {
    return OptimalWindow(Kind::Infinite, std::numeric_limits<double>::infinity());
  }
  // tau must be > 0.
  static OptimalWindow finite(double tau);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  // Window length: 0, tau, or +inf.
  double length() const { return tau_; }
  WindowSchedule schedule() const;

  friend bool operator==(const OptimalWindow&, const OptimalWindow&) = default;

 private:
  OptimalWindow(Kind k, double tau) : kind_(k), tau_(tau) {}
  Kind kind_;
  double tau_;
};

const char* to_string(OptimalWindow::Kind kind);

struct WindowBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t delta = 1;
};

// History-dependent optimal keep-alive window for a Hawkes process, using the
// `truncation` most recent arrivals.  History must be non-empty and sorted.
OptimalWindow optimal_hawkes_window(const HawkesParams& params, std::span<const double> history,
                                    const CostParams& costs,
                                    std::size_t truncation = kDefaultTruncation);

// Optimal window with no prior arrivals other than the current one; also the
// history-independent lower bound on every optimal window.
OptimalWindow empty_history_window(const HawkesParams& params, const CostParams& costs);

struct HazardScanOptions {
  double horizon = 0.0;     // scan [0, horizon]
  double resolution = 0.0;  // step; <= 0 means horizon / 1e4
  double tolerance = 1e-9;  // bisection tolerance on each boundary
};

// Windows where c_p - c_cs * hazard(x) < 0, found by a sign scan and bisection.
// A window still open at the horizon extends to +inf.
WindowSchedule windows_from_hazard(const std::function<double(double)>& hazard,
                                   const CostParams& costs, const HazardScanOptions& opts);

struct OptimizedTtlOptions {
  SimConfig sim{.seed = 0, .stop = Horizon{1440.0}};
  std::size_t truncation = kDefaultTruncation;
  std::size_t realizations = 1;
};

// Mean of the per-arrival optimal windows over simulated arrivals (Zero counts
// as 0; any Infinite window makes the result +inf).
double optimized_ttl(const HawkesParams& params, const CostParams& costs,
                     const OptimizedTtlOptions& opts = {});

// Same average over a given realization.
double optimized_ttl_from(const HawkesParams& params, std::span<const double> arrivals,
                          const CostParams& costs, std::size_t truncation = kDefaultTruncation);

// History-independent bounds on the optimal window.  Requires c_p/c_cs > lambda0.
WindowBounds window_bounds(const HawkesParams& params, std::span<const double> history,
                           const CostParams& costs);

// Ski-rental window c_cs / c_p.
double tau_fixed(const CostParams& costs);

// Worst-case-balanced window sqrt((c_cs/c_p) * (tau_empty + c_cs/c_p)).
double tau_approx(const HawkesParams& params, const CostParams& costs);

// Competitive-ratio bound guaranteed by tau_approx.
double tau_approx_ratio_bound(const HawkesParams& params, const CostParams& costs);

// Clairvoyant cost min(c_cs, c_p x); ties go to the cold start.
double offline_optimal_cost(double gap, const CostParams& costs);
// True when the clairvoyant policy takes the cold start for this gap.
bool offline_prefers_cold_start(double gap, const CostParams& costs);

}  // namespace keepalive
