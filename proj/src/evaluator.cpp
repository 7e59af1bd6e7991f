#include "keepalive/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "keepalive/errors.hpp"
#include "keepalive/seed.hpp"

namespace keepalive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Runs fn(i) for i in [0, n) on up to `threads` workers.  The first exception
// thrown by any task is rethrown after every worker has joined.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// FNV-1a, so per-app seeds do not depend on the standard library's hash.
std::uint64_t stable_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double cached_until(const WindowSchedule& schedule, double limit) {
  double total = 0.0;
  for (const Window& w : schedule.windows()) {
    if (w.start >= limit) break;
    total += std::min(w.end, limit) - w.start;
  }
  return total;
}

// Schedule used after the arrival at index `i` (history = arrivals[0..i]).
class ScheduleSource {
 public:
  ScheduleSource(const PolicySpec& policy, const CostParams& costs,
                 const std::optional<HawkesParams>& params)
      : policy_(policy), costs_(costs), params_(params) {
    std::visit(Overloaded{
                   [&](const policies::FixedTtl& p) { fixed_ = WindowSchedule::keep_alive(p.ttl); },
                   [&](const policies::PrewarmTtl& p) {
                     fixed_ = WindowSchedule::prewarm(p.prewarm, p.ttl);
                   },
                   [&](const policies::MultiWindow& p) { fixed_ = p.schedule; },
                   [&](const policies::OptimalHawkes&) { dynamic_ = true; },
                   [&](const policies::OptimizedTtl& p) {
                     fixed_ = WindowSchedule::keep_alive(p.ttl);
                   },
                   [&](const policies::Approx&) {
                     fixed_ = WindowSchedule::keep_alive(tau_approx(*params_, costs_));
                   },
                   [&](const policies::OfflineOptimal&) {},
               },
               policy_);
  }

  WindowSchedule at(std::span<const double> prefix) const {
    if (!dynamic_) return fixed_;
    const auto& p = std::get<policies::OptimalHawkes>(policy_);
    return optimal_hawkes_window(*params_, prefix, costs_, p.truncation).schedule();
  }

 private:
  const PolicySpec& policy_;
  CostParams costs_;
  std::optional<HawkesParams> params_;
  WindowSchedule fixed_;
  bool dynamic_ = false;
};

}  // namespace

std::string policy_name(const PolicySpec& policy) {
  return std::visit(Overloaded{
                        [](const policies::FixedTtl&) { return std::string("fixed"); },
                        [](const policies::PrewarmTtl&) { return std::string("prewarm"); },
                        [](const policies::MultiWindow&) { return std::string("multi-window"); },
                        [](const policies::OptimalHawkes&) { return std::string("optimal"); },
                        [](const policies::OptimizedTtl&) { return std::string("optimized-ttl"); },
                        [](const policies::Approx&) { return std::string("approx"); },
                        [](const policies::OfflineOptimal&) { return std::string("offline-optimal"); },
                    },
                    policy);
}

bool needs_params(const PolicySpec& policy) {
  return std::holds_alternative<policies::OptimalHawkes>(policy) ||
         std::holds_alternative<policies::Approx>(policy);
}

double ReplayMetrics::mean_interarrival_cost() const {
  if (per_interarrival_costs.empty()) return 0.0;
  return std::accumulate(per_interarrival_costs.begin(), per_interarrival_costs.end(), 0.0) /
         static_cast<double>(per_interarrival_costs.size());
}

ReplayMetrics replay(std::span<const double> arrivals, const PolicySpec& policy,
                     const CostParams& costs, const std::optional<HawkesParams>& params,
                     const ReplayOptions& opts) {
  costs.validate();
  if (needs_params(policy) && !params) {
    throw ConfigError("replay: policy '" + policy_name(policy) + "' needs process parameters");
  }
  if (params) params->validate();
  for (std::size_t i = 1; i < arrivals.size(); ++i) {
    if (arrivals[i] < arrivals[i - 1]) throw DataError("replay: arrivals are not sorted");
  }

  ReplayMetrics m;
  m.arrivals = arrivals.size();
  if (arrivals.empty()) return m;

  const bool offline = std::holds_alternative<policies::OfflineOptimal>(policy);
  const ScheduleSource source(policy, costs, params);

  m.cold_starts = 1;
  double sum = 0.0;
  m.per_interarrival_costs.reserve(arrivals.size() - 1);
  for (std::size_t i = 1; i < arrivals.size(); ++i) {
    const double gap = arrivals[i] - arrivals[i - 1];
    double cost = 0.0;
    if (offline) {
      cost = offline_optimal_cost(gap, costs);
      if (offline_prefers_cold_start(gap, costs)) {
        ++m.cold_starts;
      } else {
        m.warm_time_before_hits += gap;
      }
    } else {
      const RealizedOutcome out = realized_cost(gap, source.at(arrivals.first(i)), costs);
      cost = out.cost;
      if (out.cold_start) {
        ++m.cold_starts;
        m.wasted_memory_time += out.cached_time;
      } else {
        m.warm_time_before_hits += out.cached_time;
      }
    }
    m.per_interarrival_costs.push_back(cost);
    sum += cost;
  }

  if (opts.horizon && !offline) {
    const double remaining = *opts.horizon - arrivals.back();
    if (remaining > 0.0) m.trailing_waste = cached_until(source.at(arrivals), remaining);
  }
  m.wasted_memory_time += m.trailing_waste;
  m.total_cost = costs.cold_start + sum + costs.keep * m.trailing_waste;
  return m;
}

double CostCurve::min_fixed_mean_cost() const {
  if (fixed_mean_cost.empty()) return kInf;
  return *std::min_element(fixed_mean_cost.begin(), fixed_mean_cost.end());
}

CostCurve cost_curve_experiment(const HawkesParams& params, const CostParams& costs,
                                const CostCurveOptions& opts) {
  params.validate();
  costs.validate();
  if (opts.events < 2) throw ConfigError("cost curve: need at least 2 events per realization");
  if (opts.realizations == 0) throw ConfigError("cost curve: need at least one realization");

  CostCurve c;
  c.params = params;
  c.costs = costs;
  c.events = opts.events;
  c.realizations = opts.realizations;
  c.seed = opts.seed;
  c.ttl_grid = opts.ttl_grid;
  if (c.ttl_grid.empty()) {
    const std::size_t n = std::max<std::size_t>(opts.grid_points, 2);
    const double top = 2.0 * costs.cold_start / costs.keep;
    for (std::size_t i = 0; i < n; ++i) c.ttl_grid.push_back(top * static_cast<double>(i) / (n - 1));
  }

  OptimizedTtlOptions ttl_opts;
  ttl_opts.sim.seed = derive_seed(opts.seed, {0x77, 0x11});
  ttl_opts.sim.stop = EventCount{opts.events};
  ttl_opts.truncation = opts.truncation;
  ttl_opts.realizations = std::max<std::size_t>(1, opts.ttl_realizations);
  c.optimized_ttl = optimized_ttl(params, costs, ttl_opts);
  c.tau_fixed = tau_fixed(costs);
  c.tau_approx = tau_approx(params, costs);

  const std::size_t g = c.ttl_grid.size();
  // Per realization: grid costs, then optimal, optimized, tau_fixed, approx, offline.
  const std::size_t width = g + 5;
  std::vector<double> table(opts.realizations * width, 0.0);
  parallel_for(opts.realizations, opts.threads, [&](std::size_t r) {
    SimConfig sim;
    sim.seed = derive_seed(opts.seed, {r});
    sim.stop = EventCount{opts.events};
    const History h = simulate(params, sim);
    double* row = &table[r * width];
    for (std::size_t k = 0; k < g; ++k) {
      row[k] = replay(h, policies::FixedTtl{c.ttl_grid[k]}, costs).mean_interarrival_cost();
    }
    row[g] = replay(h, policies::OptimalHawkes{opts.truncation}, costs, params).mean_interarrival_cost();
    row[g + 1] = replay(h, policies::OptimizedTtl{c.optimized_ttl}, costs).mean_interarrival_cost();
    row[g + 2] = replay(h, policies::FixedTtl{c.tau_fixed}, costs).mean_interarrival_cost();
    row[g + 3] = replay(h, policies::Approx{}, costs, params).mean_interarrival_cost();
    row[g + 4] = replay(h, policies::OfflineOptimal{}, costs).mean_interarrival_cost();
  });

  std::vector<double> mean(width, 0.0);
  for (std::size_t r = 0; r < opts.realizations; ++r) {
    for (std::size_t k = 0; k < width; ++k) mean[k] += table[r * width + k];
  }
  for (double& v : mean) v /= static_cast<double>(opts.realizations);

  c.fixed_mean_cost.assign(mean.begin(), mean.begin() + static_cast<std::ptrdiff_t>(g));
  c.optimal_mean_cost = mean[g];
  c.optimized_ttl_mean_cost = mean[g + 1];
  c.tau_fixed_mean_cost = mean[g + 2];
  c.tau_approx_mean_cost = mean[g + 3];
  c.offline_mean_cost = mean[g + 4];
  return c;
}

// ---------------------------------------------------------------------------

namespace {

ParetoCurve sorted_by_cold_starts(ParetoCurve c) {
  std::sort(c.begin(), c.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    if (a.avg_cold_starts_per_app != b.avg_cold_starts_per_app) {
      return a.avg_cold_starts_per_app < b.avg_cold_starts_per_app;
    }
    return a.normalized_wasted_memory < b.normalized_wasted_memory;
  });
  return c;
}

// Piecewise-linear interpolation of memory at cold-start level x.
double memory_at(const ParetoCurve& c, double x) {
  if (c.size() == 1 || x <= c.front().avg_cold_starts_per_app) return c.front().normalized_wasted_memory;
  if (x >= c.back().avg_cold_starts_per_app) return c.back().normalized_wasted_memory;
  for (std::size_t i = 1; i < c.size(); ++i) {
    const double x0 = c[i - 1].avg_cold_starts_per_app;
    const double x1 = c[i].avg_cold_starts_per_app;
    if (x <= x1) {
      if (x1 == x0) return c[i].normalized_wasted_memory;
      const double w = (x - x0) / (x1 - x0);
      return (1.0 - w) * c[i - 1].normalized_wasted_memory + w * c[i].normalized_wasted_memory;
    }
  }
  return c.back().normalized_wasted_memory;
}

}  // namespace

SavingsSummary savings(const ParetoCurve& fixed_curve, const ParetoCurve& other_curve) {
  SavingsSummary s;
  if (fixed_curve.empty() || other_curve.empty()) {
    s.warning = "empty curve";
    return s;
  }
  const ParetoCurve a = sorted_by_cold_starts(fixed_curve);
  const ParetoCurve b = sorted_by_cold_starts(other_curve);
  const double lo = std::max(a.front().avg_cold_starts_per_app, b.front().avg_cold_starts_per_app);
  const double hi = std::min(a.back().avg_cold_starts_per_app, b.back().avg_cold_starts_per_app);
  if (!(hi > lo)) {
    s.warning = "curves do not overlap in cold starts";
    return s;
  }

  std::vector<double> xs{lo, hi};
  for (const auto* c : {&a, &b}) {
    for (const ParetoPoint& p : *c) {
      if (p.avg_cold_starts_per_app > lo && p.avg_cold_starts_per_app < hi) {
        xs.push_back(p.avg_cold_starts_per_app);
      }
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  bool positive = false;
  bool negative = false;
  double prev_diff = memory_at(a, xs[0]) - memory_at(b, xs[0]);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double diff = memory_at(a, xs[i]) - memory_at(b, xs[i]);
    positive |= diff > 1e-12;
    negative |= diff < -1e-12;
    if (i > 0) s.area += 0.5 * (prev_diff + diff) * (xs[i] - xs[i - 1]);
    prev_diff = diff;
  }
  s.curves_cross = positive && negative;
  if (s.curves_cross) s.warning = "curves cross; net area reported";

  auto extent = [](const ParetoCurve& c, auto field) {
    double lo_v = kInf;
    double hi_v = -kInf;
    for (const ParetoPoint& p : c) {
      lo_v = std::min(lo_v, p.*field);
      hi_v = std::max(hi_v, p.*field);
    }
    return hi_v - lo_v;
  };
  const double x_extent = std::max(extent(a, &ParetoPoint::avg_cold_starts_per_app),
                                   extent(b, &ParetoPoint::avg_cold_starts_per_app));
  const double y_extent = std::max(extent(a, &ParetoPoint::normalized_wasted_memory),
                                   extent(b, &ParetoPoint::normalized_wasted_memory));
  s.avg_memory_savings = s.area / x_extent;
  if (y_extent > 0.0) {
    s.avg_cold_start_savings = s.area / y_extent;
  } else if (s.warning.empty()) {
    s.warning = "flat curves; cold-start savings undefined";
  }
  return s;
}

bool weakly_pareto_dominates(const ParetoCurve& a, const ParetoCurve& b, double tol) {
  if (b.empty()) return true;
  if (a.empty()) return false;
  const ParetoCurve ca = sorted_by_cold_starts(a);
  // Lowest memory reachable on a's piecewise-linear curve at no more than x cold starts.
  auto envelope = [&](double x) {
    double best = INFINITY;
    for (std::size_t i = 0; i < ca.size(); ++i) {
      if (ca[i].avg_cold_starts_per_app > x) {
        if (i > 0) {
          const double x0 = ca[i - 1].avg_cold_starts_per_app;
          const double x1 = ca[i].avg_cold_starts_per_app;
          const double w = (x - x0) / (x1 - x0);
          best = std::min(best, (1.0 - w) * ca[i - 1].normalized_wasted_memory + w * ca[i].normalized_wasted_memory);
        }
        break;
      }
      best = std::min(best, ca[i].normalized_wasted_memory);
    }
    return best;
  };
  // Points of b with fewer cold starts than a ever reaches are outside a's range
  // and are not compared, as in the savings area.
  const double lo = ca.front().avg_cold_starts_per_app - tol;
  for (const ParetoPoint& pb : b) {
    if (pb.avg_cold_starts_per_app < lo) continue;
    if (envelope(pb.avg_cold_starts_per_app + tol) > pb.normalized_wasted_memory + tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

struct AppWork {
  AppAssessment info;
  const History* eval = nullptr;
  History ttl_sim;  // simulated day used for the optimized TTL
};

std::map<std::string, ParetoCurve> empty_curves() {
  std::map<std::string, ParetoCurve> m;
  for (const auto& name : kTracePolicies) m[name];
  return m;
}

}  // namespace

TraceExperimentResult trace_experiment(const TraceDataset& dataset,
                                       const TraceExperimentConfig& config) {
  if (config.ccs_grid.empty()) throw ConfigError("trace experiment: empty cold-start cost grid");
  if (!(config.treat_fraction >= 0.0 && config.treat_fraction <= 1.0)) {
    throw ConfigError("trace experiment: treat fraction must be in [0, 1]");
  }
  if (!(config.default_ttl >= 0.0)) throw ConfigError("trace experiment: default TTL must be >= 0");
  for (double ccs : config.ccs_grid) CostParams{config.keep_cost, ccs}.validate();

  TraceExperimentResult result;
  std::vector<AppWork> work;
  for (const auto& [id, by_day] : dataset.apps) {
    const History& eval = dataset.arrivals(id, config.eval_day);
    if (eval.empty()) continue;
    AppWork w;
    w.info.id = id;
    w.eval = &eval;
    w.info.eval_arrivals = eval.size();
    w.info.fit_arrivals = dataset.arrivals(id, config.fit_day).size();
    w.info.gof_arrivals = dataset.arrivals(id, config.gof_day).size();
    work.push_back(std::move(w));
  }
  if (work.empty()) throw DataError("trace experiment: no application has arrivals on the evaluation day");

  parallel_for(work.size(), config.threads, [&](std::size_t i) {
    AppWork& w = work[i];
    AppAssessment& a = w.info;
    if (a.fit_arrivals < 5) {
      a.excluded_reason = "fewer than 5 arrivals on the fit day";
      return;
    }
    if (a.gof_arrivals < 2) {
      a.excluded_reason = "fewer than 2 arrivals on the goodness-of-fit day";
      return;
    }
    const std::uint64_t app_seed = derive_seed(config.seed, {stable_hash(a.id)});
    FitOptions fo = config.fit;
    fo.seed = derive_seed(app_seed, {1});
    try {
      a.fit = fit(dataset.arrivals(a.id, config.fit_day), std::nullopt, fo);
    } catch (const NumericError& e) {
      a.excluded_reason = std::string("fit failed: ") + e.what();
      return;
    }
    a.gof = ks_test_exp1(residuals(a.fit->params, dataset.arrivals(a.id, config.gof_day)));

    SimConfig sim;
    sim.seed = derive_seed(app_seed, {2});
    sim.stop = Horizon{config.optimized_ttl_horizon};
    sim.safety_cap = 200'000;
    try {
      w.ttl_sim = simulate(a.fit->params, sim);
    } catch (const CapExceededError&) {
      a.excluded_reason = "optimized-TTL simulation exceeded the event cap";
      return;
    } catch (const DomainError& e) {
      a.excluded_reason = std::string("optimized-TTL simulation failed: ") + e.what();
      return;
    }
    if (w.ttl_sim.size() < 2) a.excluded_reason = "optimized-TTL simulation produced fewer than 2 arrivals";
  });

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (work[i].info.excluded_reason.empty()) eligible.push_back(i);
  }
  std::sort(eligible.begin(), eligible.end(), [&](std::size_t x, std::size_t y) {
    const double dx = work[x].info.gof->ks_statistic;
    const double dy = work[y].info.gof->ks_statistic;
    if (dx != dy) return dx < dy;
    return work[x].info.id < work[y].info.id;
  });
  const auto wanted =
      static_cast<std::size_t>(std::floor(config.treat_fraction * static_cast<double>(work.size())));
  const std::size_t n_treat = std::min(wanted, eligible.size());
  if (n_treat < wanted) {
    result.log.push_back("only " + std::to_string(eligible.size()) + " eligible apps; treating " +
                         std::to_string(n_treat) + " instead of " + std::to_string(wanted));
  }
  for (std::size_t k = 0; k < n_treat; ++k) work[eligible[k]].info.treated = true;
  result.log.push_back(std::to_string(work.size()) + " apps on the evaluation day, " +
                       std::to_string(eligible.size()) + " eligible, " + std::to_string(n_treat) +
                       " treated");

  const std::size_t grid = config.ccs_grid.size();
  const std::size_t n_policies = kTracePolicies.size();
  // Per app: default-policy waste, then (grid x policy) cold starts and waste.
  struct AppRow {
    double default_waste = 0.0;
    std::vector<double> cold;
    std::vector<double> waste;
  };
  std::vector<AppRow> rows(work.size());
  const ReplayOptions day{static_cast<double>(kMinutesPerDay)};

  parallel_for(work.size(), config.threads, [&](std::size_t i) {
    const AppWork& w = work[i];
    AppRow& row = rows[i];
    row.cold.assign(grid * n_policies, 0.0);
    row.waste.assign(grid * n_policies, 0.0);
    const std::span<const double> eval = *w.eval;
    const CostParams unit{config.keep_cost, config.keep_cost * config.default_ttl};
    row.default_waste =
        replay(eval, policies::FixedTtl{config.default_ttl}, unit, std::nullopt, day).wasted_memory_time;

    for (std::size_t gi = 0; gi < grid; ++gi) {
      const CostParams costs{config.keep_cost, config.ccs_grid[gi]};
      const PolicySpec untreated = config.untreated == UntreatedPolicy::MatchedFixed
                                       ? PolicySpec{policies::FixedTtl{tau_fixed(costs)}}
                                       : PolicySpec{policies::FixedTtl{config.default_ttl}};
      for (std::size_t pi = 0; pi < n_policies; ++pi) {
        const std::string& name = kTracePolicies[pi];
        PolicySpec policy = untreated;
        std::optional<HawkesParams> params;
        if (name == "fixed") {
          policy = policies::FixedTtl{tau_fixed(costs)};
        } else if (w.info.treated) {
          params = w.info.fit->params;
          if (name == "optimal") {
            policy = policies::OptimalHawkes{config.truncation};
          } else if (name == "optimized-ttl") {
            const double ttl = costs.ratio() <= params->lambda0
                                   ? kInf
                                   : optimized_ttl_from(*params, w.ttl_sim, costs, config.truncation);
            policy = policies::OptimizedTtl{ttl};
          } else if (name == "approx") {
            policy = policies::Approx{};
          } else {
            policy = policies::OfflineOptimal{};
          }
        }
        const ReplayMetrics m = replay(eval, policy, costs, params, day);
        row.cold[gi * n_policies + pi] = static_cast<double>(m.cold_starts);
        row.waste[gi * n_policies + pi] = m.wasted_memory_time;
      }
    }
  });

  auto build = [&](bool treated_only) {
    PopulationCurves pc;
    pc.curves = empty_curves();
    std::vector<double> cold(grid * n_policies, 0.0);
    std::vector<double> waste(grid * n_policies, 0.0);
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (treated_only && !work[i].info.treated) continue;
      ++pc.apps;
      pc.default_waste += rows[i].default_waste;
      for (std::size_t k = 0; k < cold.size(); ++k) {
        cold[k] += rows[i].cold[k];
        waste[k] += rows[i].waste[k];
      }
    }
    if (pc.apps == 0) return pc;
    for (std::size_t pi = 0; pi < n_policies; ++pi) {
      ParetoCurve& curve = pc.curves[kTracePolicies[pi]];
      for (std::size_t gi = 0; gi < grid; ++gi) {
        const std::size_t k = gi * n_policies + pi;
        ParetoPoint p;
        p.cold_start_cost = config.ccs_grid[gi];
        p.avg_cold_starts_per_app = cold[k] / static_cast<double>(pc.apps);
        p.wasted_memory_time = waste[k];
        p.normalized_wasted_memory = pc.default_waste > 0.0 ? waste[k] / pc.default_waste : 0.0;
        curve.push_back(p);
      }
    }
    for (const auto& name : kTracePolicies) {
      if (name == "fixed") continue;
      pc.savings[name] = savings(pc.curves["fixed"], pc.curves[name]);
    }
    return pc;
  };
  result.treated = build(true);
  result.all = build(false);
  if (result.treated.default_waste == 0.0 && result.treated.apps > 0) {
    result.log.push_back("default-policy waste is zero on the treated population; memory not normalized");
  }

  result.apps.reserve(work.size());
  for (auto& w : work) result.apps.push_back(std::move(w.info));
  return result;
}

}  // namespace keepalive
