#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace keepalive {

// Exponential-kernel Hawkes process:
//   lambda(t | H) = lambda0 + alpha * sum_{t_j <= t} exp(-beta (t - t_j)).
// alpha == 0 is a homogeneous Poisson process of rate lambda0.
struct HawkesParams {
  double lambda0 = 0.0;
  double alpha = 0.0;
  double beta = 1.0;

  // Throws DomainError unless lambda0 >= 0, alpha >= 0, beta > 0, all finite.
  void validate() const;

  double branching_ratio() const { return alpha / beta; }
  bool stationary() const { return alpha < beta; }
  // Long-run event rate lambda0 / (1 - alpha/beta); +inf when non-stationary.
  double mean_rate() const;
};

// Ordered arrival timestamps of one application.
class History {
 public:
  History() = default;
  // Throws DomainError if the timestamps are not strictly increasing or not finite.
  explicit History(std::vector<double> arrivals);

  std::span<const double> times() const { return arrivals_; }
  operator std::span<const double>() const { return arrivals_; }  // NOLINT

  std::size_t size() const { return arrivals_.size(); }
  bool empty() const { return arrivals_.empty(); }
  double last() const { return arrivals_.back(); }
  double operator[](std::size_t i) const { return arrivals_[i]; }
  const std::vector<double>& vector() const { return arrivals_; }

  friend bool operator==(const History&, const History&) = default;

 private:
  std::vector<double> arrivals_;
};

struct EventCount {
  std::size_t events = 0;
};
struct Horizon {
  double end = 0.0;
};

struct SimConfig {
  std::uint64_t seed = 0;
  std::variant<EventCount, Horizon> stop = EventCount{1};
  // Upper limit on generated events; exceeding it raises CapExceededError.
  std::size_t safety_cap = 1'000'000;
  // Simulation starts at this time with an empty history.
  double start = 0.0;

  void validate() const;
};

// Running excitation sum  E(t) = sum_{t_j <= t} exp(-beta (t - t_j))  over a
// sorted stream of arrivals, updated in O(1) per arrival.
class ExcitationSum {
 public:
  explicit ExcitationSum(double beta) : beta_(beta) {}

  // Adds an arrival at t; t must not precede the previous arrival.
  void add(double t);
  // E(t) for t >= last arrival.
  double at(double t) const;
  // E at the most recent arrival, including its own unit jump.
  double value() const { return sum_; }
  double last() const { return last_; }
  bool empty() const { return count_ == 0; }

 private:
  double beta_;
  double sum_ = 0.0;
  double last_ = -std::numeric_limits<double>::infinity();
  std::size_t count_ = 0;
};

// Excitation sum of `arrivals` evaluated at their last element.
double excitation_at_last(double beta, std::span<const double> arrivals);

// Conditional intensity at t >= last arrival (right limit at an arrival).
double intensity(const HawkesParams& params, std::span<const double> history, double t);

// Integral of the intensity over [from, to], from >= last arrival.
double compensator_increment(const HawkesParams& params, std::span<const double> history,
                             double from, double to);

// Distribution of the gap to the next arrival given a history, with the
// excitation sum precomputed so each evaluation is O(1).  Elapsed time x is
// measured from the last arrival (from 0 for an empty history).
class NextGap {
 public:
  NextGap(const HawkesParams& params, std::span<const double> history);

  double origin() const { return origin_; }
  double hazard(double x) const;
  // Integral of the hazard over [0, x].
  double compensator(double x) const;
  double survival(double x) const;
  double density(double x) const;
  // Compensator at infinity; finite only when lambda0 == 0.
  double total_mass() const;
  // Smallest x with compensator(x) == target; +inf when target >= total_mass().
  double inverse_compensator(double target) const;
  double sample(std::mt19937_64& rng) const;

 private:
  HawkesParams params_;
  double origin_ = 0.0;
  double excitation_ = 0.0;  // excitation sum at the origin
};

// P(no arrival within x of the most recent arrival | history).
// Empty history is measured from time 0.
double survival(const HawkesParams& params, std::span<const double> history, double x);

// Density of the next inter-arrival gap at x: intensity * survival.
double gap_density(const HawkesParams& params, std::span<const double> history, double x);

// Hazard of the next gap at elapsed time x (intensity at last arrival + x).
double hazard(const HawkesParams& params, std::span<const double> history, double x);

// Draws the next inter-arrival gap by inverting the compensator.  Returns +inf
// when the process may never fire again (lambda0 == 0) and the draw exceeds
// the total remaining mass.
double sample_next_gap(const HawkesParams& params, std::span<const double> history,
                       std::mt19937_64& rng);

// Ogata's modified thinning.  Deterministic for a given seed.
History simulate(const HawkesParams& params, const SimConfig& cfg);

}  // namespace keepalive
