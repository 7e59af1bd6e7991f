#include "keepalive/cost.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "keepalive/errors.hpp"

namespace keepalive {

RealizedOutcome realized_cost(double gap, const WindowSchedule& schedule, const CostParams& costs) {
  if (!(gap >= 0.0)) throw DomainError("realized_cost: gap must be >= 0");
  RealizedOutcome out;
  out.cold_start = true;
  for (const Window& w : schedule.windows()) {
    if (gap < w.start) break;
    if (gap <= w.end) {
      out.cached_time += gap - w.start;
      out.cold_start = false;
      break;
    }
    out.cached_time += w.length();
  }
  out.cost = costs.keep * out.cached_time + (out.cold_start ? costs.cold_start : 0.0);
  return out;
}

double instantaneous_cost_g(const HawkesParams& params, std::span<const double> history, double x,
                            const CostParams& costs) {
  const NextGap gap(params, history);
  return gap.survival(x) * (costs.keep - costs.cold_start * gap.hazard(x));
}

double expected_cost(const HawkesParams& params, std::span<const double> history,
                     const WindowSchedule& schedule, const CostParams& costs,
                     const ExpectedCostOptions& opts) {
  costs.validate();
  const NextGap gap(params, history);
  const double tail_mass = -std::log(opts.survival_floor);
  // Beyond this elapsed time the conditional survival is below the floor.
  const double cutoff = gap.inverse_compensator(tail_mass);
  const double budget = opts.relative_tolerance * costs.cold_start;

  auto g = [&](double x) { return gap.survival(x) * (costs.keep - costs.cold_start * gap.hazard(x)); };

  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = costs.cold_start;
  double error = 0.0;
  for (const Window& w : schedule.windows()) {
    if (w.start >= cutoff) break;
    double end = w.end;
    if (end > cutoff) {
      if (std::isinf(cutoff)) {
        std::ostringstream msg;
        msg << "expected_cost: unbounded window [" << w.start
            << ", inf) with survival bounded below by exp(-" << gap.total_mass()
            << "); expected cached time diverges";
        throw NumericError(msg.str());
      }
      end = cutoff;
    }
    // Split at unit steps of the compensator so each piece carries comparable
    // probability mass and the adaptive rule sees a smooth integrand.
    double a = w.start;
    const double mass_a = gap.compensator(a);
    const double mass_end = gap.compensator(end);
    for (double level = mass_a + 1.0; a < end; level += 1.0) {
      const double b = level >= mass_end ? end : std::min(end, gap.inverse_compensator(level));
      if (b > a) {
        double piece_error = 0.0;
        total += Quadrature::integrate(g, a, b, 15, 1e-12, &piece_error);
        error += piece_error;
      }
      a = b;
    }
  }
  if (!(error <= budget) || !std::isfinite(total)) {
    std::ostringstream msg;
    msg << "expected_cost: quadrature error estimate " << error << " exceeds budget " << budget
        << " (value " << total << ", " << schedule.size() << " windows, survival cutoff x="
        << cutoff << ")";
    throw NumericError(msg.str());
  }
  return total;
}

}  // namespace keepalive
