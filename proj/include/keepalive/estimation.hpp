#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "keepalive/point_process.hpp"

namespace keepalive {

struct FitResult {
  HawkesParams params;
  double nll = 0.0;
  bool converged = false;
  std::size_t iterations = 0;  // summed over restarts
  std::size_t restarts = 0;
};

struct GofResult {
  double ks_statistic = 0.0;  // D in [0, 1]
  double p_value = 1.0;
  std::size_t n_residuals = 0;
};

struct FitOptions {
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 5000;
  double simplex_tolerance = 1e-6;  // diameter in log-parameter space
  double value_tolerance = 1e-9;    // spread of NLL over the simplex
  double initial_step = 0.5;        // log-space offset of the initial simplex
};

// Hawkes log-likelihood on the observation window [0, t_k]:
//   sum_i log(lambda0 + alpha A(i)) - lambda0 t_k + (alpha/beta) sum_i (e^{-beta (t_k - t_i)} - 1)
// with A(i) = sum_{j<i} e^{-beta (t_i - t_j)}.  Returns -inf when some
// intensity term is not positive.
double log_likelihood(const HawkesParams& params, std::span<const double> arrivals);

// Heuristic starting point from the empirical rate and mean gap.
HawkesParams initial_guess(std::span<const double> arrivals);

// Maximum likelihood by Nelder-Mead in log-parameter space with seeded
// restarts.  Arrivals are shifted so the first one is at time 0.
// Throws DataError for fewer than 5 arrivals; NumericError if every restart is infeasible.
FitResult fit(std::span<const double> arrivals, std::optional<HawkesParams> init = std::nullopt,
              const FitOptions& opts = {});

// Compensator increments between consecutive arrivals (random time change).
std::vector<double> residuals(const HawkesParams& params, std::span<const double> arrivals);

// One-sample Kolmogorov-Smirnov test against Exp(1), asymptotic p-value.
GofResult ks_test_exp1(std::span<const double> gaps);

// Kolmogorov limiting survival function P(K > x).
double kolmogorov_survival(double x);

}  // namespace keepalive
