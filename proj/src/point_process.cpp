#include "keepalive/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "keepalive/errors.hpp"

namespace keepalive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_after_last(std::span<const double> history, double t, const char* what) {
  if (!history.empty() && t < history.back()) {
    throw DomainError(std::string(what) + ": time " + std::to_string(t) +
                      " precedes last arrival " + std::to_string(history.back()));
  }
}

// Excitation sum of the history evaluated at t >= last arrival.
double excitation(double beta, std::span<const double> history, double t) {
  if (history.empty()) return 0.0;
  return excitation_at_last(beta, history) * std::exp(-beta * (t - history.back()));
}

}  // namespace

void HawkesParams::validate() const {
  if (!std::isfinite(lambda0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("HawkesParams: parameters must be finite");
  }
  if (lambda0 < 0.0) throw DomainError("HawkesParams: lambda0 must be >= 0");
  if (alpha < 0.0) throw DomainError("HawkesParams: alpha must be >= 0");
  if (beta <= 0.0) throw DomainError("HawkesParams: beta must be > 0");
}

double HawkesParams::mean_rate() const {
  if (!stationary()) return kInf;
  return lambda0 / (1.0 - branching_ratio());
}

History::History(std::vector<double> arrivals) : arrivals_(std::move(arrivals)) {
  for (std::size_t i = 0; i < arrivals_.size(); ++i) {
    if (!std::isfinite(arrivals_[i])) {
      throw DomainError("History: non-finite timestamp at index " + std::to_string(i));
    }
    if (i > 0 && !(arrivals_[i] > arrivals_[i - 1])) {
      throw DomainError("History: timestamps not strictly increasing at index " +
                        std::to_string(i));
    }
  }
}

void SimConfig::validate() const {
  if (const auto* c = std::get_if<EventCount>(&stop)) {
    if (c->events < 1) throw DomainError("SimConfig: event-count target must be >= 1");
  } else {
    const double end = std::get<Horizon>(stop).end;
    if (!(end > start) || !std::isfinite(end)) {
      throw DomainError("SimConfig: horizon must be finite and after the start time");
    }
  }
  if (safety_cap < 1) throw DomainError("SimConfig: safety cap must be >= 1");
}

void ExcitationSum::add(double t) {
  if (count_ > 0) {
    if (t < last_) throw DomainError("ExcitationSum: arrivals out of order");
    sum_ = sum_ * std::exp(-beta_ * (t - last_)) + 1.0;
  } else {
    sum_ = 1.0;
  }
  last_ = t;
  ++count_;
}

double ExcitationSum::at(double t) const {
  if (count_ == 0) return 0.0;
  return sum_ * std::exp(-beta_ * (t - last_));
}

double excitation_at_last(double beta, std::span<const double> arrivals) {
  ExcitationSum acc(beta);
  for (double t : arrivals) acc.add(t);
  return acc.value();
}

double intensity(const HawkesParams& params, std::span<const double> history, double t) {
  require_after_last(history, t, "intensity");
  if (params.alpha == 0.0) return params.lambda0;
  return params.lambda0 + params.alpha * excitation(params.beta, history, t);
}

double compensator_increment(const HawkesParams& params, std::span<const double> history,
                             double from, double to) {
  if (to < from) throw DomainError("compensator_increment: interval end precedes start");
  require_after_last(history, from, "compensator_increment");
  if (to == from) return 0.0;
  double background = 0.0;
  if (params.lambda0 > 0.0) background = params.lambda0 * (to - from);
  if (params.alpha == 0.0 || history.empty()) return background;
  const double e_from = excitation(params.beta, history, from);
  // -expm1 keeps precision for short intervals.
  const double decayed =
      std::isinf(to) ? 1.0 : -std::expm1(-params.beta * (to - from));
  return background + params.alpha / params.beta * e_from * decayed;
}

NextGap::NextGap(const HawkesParams& params, std::span<const double> history)
    : params_(params) {
  params_.validate();
  if (!history.empty()) {
    origin_ = history.back();
    excitation_ = excitation_at_last(params.beta, history);
  }
}

double NextGap::hazard(double x) const {
  if (x < 0.0) throw DomainError("NextGap: elapsed time must be >= 0");
  if (params_.alpha == 0.0 || excitation_ == 0.0) return params_.lambda0;
  return params_.lambda0 + params_.alpha * excitation_ * std::exp(-params_.beta * x);
}

double NextGap::compensator(double x) const {
  if (x < 0.0) throw DomainError("NextGap: elapsed time must be >= 0");
  if (x == 0.0) return 0.0;
  const double background = params_.lambda0 > 0.0 ? params_.lambda0 * x : 0.0;
  if (params_.alpha == 0.0 || excitation_ == 0.0) return background;
  const double decayed = std::isinf(x) ? 1.0 : -std::expm1(-params_.beta * x);
  return background + params_.alpha / params_.beta * excitation_ * decayed;
}

double NextGap::survival(double x) const { return std::exp(-compensator(x)); }

double NextGap::density(double x) const { return hazard(x) * survival(x); }

double NextGap::total_mass() const { return compensator(kInf); }

double NextGap::inverse_compensator(double target) const {
  if (!(target >= 0.0)) throw DomainError("NextGap: compensator target must be >= 0");
  if (target == 0.0) return 0.0;
  const double jump_mass = params_.alpha / params_.beta * excitation_;
  if (params_.lambda0 == 0.0) {
    if (target >= jump_mass) return kInf;
    return -std::log1p(-target / jump_mass) / params_.beta;
  }
  if (jump_mass == 0.0) return target / params_.lambda0;

  // compensator(x) = lambda0 x + jump_mass (1 - e^{-beta x}) is increasing;
  // the root lies in [0, target / lambda0].  Safeguarded Newton.
  double lo = 0.0;
  double hi = target / params_.lambda0;
  double x = std::min(hi, target / hazard(0.0));
  for (int it = 0; it < 200; ++it) {
    const double f = compensator(x) - target;
    if (f > 0.0) hi = x; else lo = x;
    if (std::abs(f) <= 1e-15 * std::max(1.0, target) || hi - lo <= 1e-15 * std::max(1.0, hi)) {
      break;
    }
    double next = x - f / hazard(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

double NextGap::sample(std::mt19937_64& rng) const {
  std::exponential_distribution<double> unit_exp(1.0);
  return inverse_compensator(unit_exp(rng));
}

double survival(const HawkesParams& params, std::span<const double> history, double x) {
  if (x < 0.0) throw DomainError("survival: elapsed time must be >= 0");
  return NextGap(params, history).survival(x);
}

double hazard(const HawkesParams& params, std::span<const double> history, double x) {
  if (x < 0.0) throw DomainError("hazard: elapsed time must be >= 0");
  return NextGap(params, history).hazard(x);
}

double gap_density(const HawkesParams& params, std::span<const double> history, double x) {
  return NextGap(params, history).density(x);
}

double sample_next_gap(const HawkesParams& params, std::span<const double> history,
                       std::mt19937_64& rng) {
  return NextGap(params, history).sample(rng);
}

History simulate(const HawkesParams& params, const SimConfig& cfg) {
  params.validate();
  cfg.validate();

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const auto* count_stop = std::get_if<EventCount>(&cfg.stop);
  const double end = count_stop ? kInf : std::get<Horizon>(cfg.stop).end;
  const std::size_t target = count_stop ? count_stop->events : 0;

  std::vector<double> events;
  ExcitationSum excite(params.beta);
  double t = cfg.start;

  for (;;) {
    // The kernel only decays between events, so the intensity right now bounds
    // the intensity until the next accepted point.
    const double bound = params.lambda0 + params.alpha * excite.at(t);
    if (bound <= 0.0) {
      if (count_stop) {
        throw DomainError("simulate: process has zero intensity and cannot reach the event target");
      }
      break;
    }
    std::exponential_distribution<double> wait(bound);
    t += wait(rng);
    if (t > end) break;

    const double rate = params.lambda0 + params.alpha * excite.at(t);
    if (unif(rng) * bound > rate) continue;
    if (!events.empty() && !(t > events.back())) continue;

    excite.add(t);
    events.push_back(t);
    if (events.size() > cfg.safety_cap) {
      throw CapExceededError("simulate: exceeded safety cap of " +
                             std::to_string(cfg.safety_cap) + " events");
    }
    if (count_stop && events.size() >= target) break;
  }
  return History(std::move(events));
}

}  // namespace keepalive
