#include "keepalive/estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "keepalive/errors.hpp"

namespace keepalive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Point = std::array<double, 3>;  // log lambda0, log alpha, log beta

HawkesParams from_log(const Point& p) {
  return HawkesParams{std::exp(p[0]), std::exp(p[1]), std::exp(p[2])};
}

Point to_log(const HawkesParams& h) {
  return {std::log(h.lambda0), std::log(h.alpha), std::log(h.beta)};
}

struct SimplexResult {
  Point best;
  double value = kInf;
  bool converged = false;
  std::size_t iterations = 0;
};

template <class F>
SimplexResult nelder_mead(F&& objective, const Point& start, const FitOptions& opts) {
  constexpr std::size_t kDim = 3;
  std::array<Point, kDim + 1> vertex;
  std::array<double, kDim + 1> value;
  vertex[0] = start;
  for (std::size_t i = 0; i < kDim; ++i) {
    vertex[i + 1] = start;
    vertex[i + 1][i] += opts.initial_step;
  }
  for (std::size_t i = 0; i <= kDim; ++i) value[i] = objective(vertex[i]);

  std::array<std::size_t, kDim + 1> order{};
  SimplexResult out;
  for (out.iterations = 0; out.iterations < opts.max_iterations; ++out.iterations) {
    for (std::size_t i = 0; i <= kDim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return value[a] < value[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[kDim];
    const std::size_t second = order[kDim - 1];

    double diameter = 0.0;
    for (std::size_t i = 1; i <= kDim; ++i) {
      for (std::size_t d = 0; d < kDim; ++d) {
        diameter = std::max(diameter, std::abs(vertex[order[i]][d] - vertex[best][d]));
      }
    }
    const double spread = value[worst] - value[best];
    if (std::isfinite(value[best]) &&
        (diameter < opts.simplex_tolerance || spread < opts.value_tolerance)) {
      out.converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t i = 0; i < kDim; ++i) {
      for (std::size_t d = 0; d < kDim; ++d) centroid[d] += vertex[order[i]][d] / kDim;
    }
    auto along = [&](double t) {
      Point p;
      for (std::size_t d = 0; d < kDim; ++d) p[d] = centroid[d] + t * (vertex[worst][d] - centroid[d]);
      return p;
    };

    const Point reflected = along(-1.0);
    const double f_reflected = objective(reflected);
    if (f_reflected < value[best]) {
      const Point expanded = along(-2.0);
      const double f_expanded = objective(expanded);
      if (f_expanded < f_reflected) {
        vertex[worst] = expanded;
        value[worst] = f_expanded;
      } else {
        vertex[worst] = reflected;
        value[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < value[second]) {
      vertex[worst] = reflected;
      value[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < value[worst];
    const Point contracted = along(outside ? -0.5 : 0.5);
    const double f_contracted = objective(contracted);
    if (f_contracted < (outside ? f_reflected : value[worst])) {
      vertex[worst] = contracted;
      value[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 1; i <= kDim; ++i) {
      const std::size_t k = order[i];
      for (std::size_t d = 0; d < kDim; ++d) {
        vertex[k][d] = vertex[best][d] + 0.5 * (vertex[k][d] - vertex[best][d]);
      }
      value[k] = objective(vertex[k]);
    }
  }
  const auto it = std::min_element(value.begin(), value.end());
  out.best = vertex[static_cast<std::size_t>(it - value.begin())];
  out.value = *it;
  return out;
}

}  // namespace

double log_likelihood(const HawkesParams& params, std::span<const double> arrivals) {
  params.validate();
  if (arrivals.empty()) throw DomainError("log_likelihood: no arrivals");
  const double tk = arrivals.back();
  double sum_log = 0.0;
  double a = 0.0;  // A(i)
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    if (i > 0) {
      if (!(arrivals[i] > arrivals[i - 1])) {
        throw DomainError("log_likelihood: arrivals must be strictly increasing");
      }
      a = std::exp(-params.beta * (arrivals[i] - arrivals[i - 1])) * (1.0 + a);
    }
    const double rate = params.lambda0 + params.alpha * a;
    if (!(rate > 0.0)) return -kInf;
    sum_log += std::log(rate);
  }
  double tail = 0.0;
  for (double t : arrivals) tail += std::expm1(-params.beta * (tk - t));
  return sum_log - params.lambda0 * tk + params.alpha / params.beta * tail;
}

HawkesParams initial_guess(std::span<const double> arrivals) {
  const double span = arrivals.back() - arrivals.front();
  const auto k = static_cast<double>(arrivals.size());
  const double mean_gap = span / (k - 1.0);
  HawkesParams h;
  h.lambda0 = 0.5 * k / span;
  h.beta = 1.0 / mean_gap;
  h.alpha = h.beta / 2.0;
  return h;
}

FitResult fit(std::span<const double> arrivals, std::optional<HawkesParams> init,
              const FitOptions& opts) {
  if (arrivals.size() < 5) {
    throw DataError("fit: need at least 5 arrivals, got " + std::to_string(arrivals.size()));
  }
  std::vector<double> shifted(arrivals.begin(), arrivals.end());
  const double origin = shifted.front();
  for (double& t : shifted) t -= origin;
  for (std::size_t i = 1; i < shifted.size(); ++i) {
    if (!(shifted[i] > shifted[i - 1])) throw DataError("fit: arrivals must be strictly increasing");
  }

  const HawkesParams guess = init.value_or(initial_guess(shifted));
  guess.validate();
  if (!(guess.lambda0 > 0.0 && guess.alpha > 0.0)) {
    throw DomainError("fit: initial lambda0 and alpha must be positive");
  }

  auto nll = [&](const Point& p) {
    for (double v : p) {
      if (!std::isfinite(v) || std::abs(v) > 700.0) return kInf;
    }
    const double ll = log_likelihood(from_log(p), shifted);
    return std::isfinite(ll) ? -ll : kInf;
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  const Point base = to_log(guess);

  FitResult result;
  result.nll = kInf;
  const std::size_t runs = std::max<std::size_t>(1, opts.restarts);
  for (std::size_t r = 0; r < runs; ++r) {
    Point start = base;
    if (r > 0) {
      for (double& v : start) v += jitter(rng);
    }
    const SimplexResult s = nelder_mead(nll, start, opts);
    result.iterations += s.iterations;
    ++result.restarts;
    if (s.value < result.nll) {
      result.nll = s.value;
      result.params = from_log(s.best);
      result.converged = s.converged;
    }
  }
  if (!std::isfinite(result.nll)) throw NumericError("fit: every restart was infeasible");
  return result;
}

std::vector<double> residuals(const HawkesParams& params, std::span<const double> arrivals) {
  params.validate();
  if (arrivals.size() < 2) throw DataError("residuals: need at least 2 arrivals");
  std::vector<double> out;
  out.reserve(arrivals.size() - 1);
  ExcitationSum excite(params.beta);
  excite.add(arrivals[0]);
  for (std::size_t i = 1; i < arrivals.size(); ++i) {
    const double dt = arrivals[i] - arrivals[i - 1];
    if (!(dt > 0.0)) throw DataError("residuals: arrivals must be strictly increasing");
    out.push_back(params.lambda0 * dt -
                  params.alpha / params.beta * excite.value() * std::expm1(-params.beta * dt));
    excite.add(arrivals[i]);
  }
  return out;
}

double kolmogorov_survival(double x) {
  if (!(x > 0.0)) return 1.0;
  if (x < 1.18) {
    // P(K <= x) = sqrt(2 pi)/x sum_k exp(-(2k-1)^2 pi^2 / (8 x^2))
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      cdf += std::exp(-m * m * c);
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

GofResult ks_test_exp1(std::span<const double> gaps) {
  if (gaps.empty()) throw DataError("ks_test_exp1: no residuals");
  std::vector<double> sorted(gaps.begin(), gaps.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = sorted[i] > 0.0 ? -std::expm1(-sorted[i]) : 0.0;
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  GofResult out;
  out.ks_statistic = std::clamp(d, 0.0, 1.0);
  out.n_residuals = sorted.size();
  out.p_value = kolmogorov_survival(std::sqrt(n) * out.ks_statistic);
  return out;
}

}  // namespace keepalive
