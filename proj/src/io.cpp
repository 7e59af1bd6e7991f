#include "keepalive/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "keepalive/errors.hpp"

namespace keepalive::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  // Shortest round-trip representation never needs more than 17 digits.
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double to_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ConfigError("expected a number, got " + j.dump());
}

void write_timestamps(std::ostream& os, std::span<const double> times) {
  os << "t\n";
  for (double t : times) os << format_double(t) << '\n';
}

std::vector<double> read_timestamps(std::istream& is, const std::string& source) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string field = line.substr(0, line.find(','));
    const auto first = field.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = field.find_last_not_of(" \t");
    const char* b = field.data() + first;
    const char* e = field.data() + last + 1;
    double v = 0.0;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e || !std::isfinite(v)) {
      if (out.empty() && lineno == 1) continue;  // header
      throw DataError(source + ":" + std::to_string(lineno) + ": not a timestamp: '" + field + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> read_timestamps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_timestamps(in, path.string());
}

json to_json(const HawkesParams& p) {
  return {{"lambda0", p.lambda0}, {"alpha", p.alpha}, {"beta", p.beta}};
}

json to_json(const CostParams& c) { return {{"cp", c.keep}, {"ccs", c.cold_start}}; }

json to_json(const FitResult& f) {
  return {{"params", to_json(f.params)},
          {"nll", number(f.nll)},
          {"converged", f.converged},
          {"iterations", f.iterations},
          {"restarts", f.restarts}};
}

json to_json(const GofResult& g) {
  return {{"ks_statistic", g.ks_statistic}, {"p_value", g.p_value}, {"n_residuals", g.n_residuals}};
}

json to_json(const ReplayMetrics& m, bool with_costs) {
  json j{{"arrivals", m.arrivals},
         {"cold_starts", m.cold_starts},
         {"wasted_memory_time", m.wasted_memory_time},
         {"warm_time_before_hits", m.warm_time_before_hits},
         {"trailing_waste", m.trailing_waste},
         {"total_cost", m.total_cost},
         {"mean_interarrival_cost", m.mean_interarrival_cost()}};
  if (with_costs) j["per_interarrival_costs"] = m.per_interarrival_costs;
  return j;
}

json to_json(const OptimalWindow& w) {
  json j{{"kind", to_string(w.kind())}};
  if (w.is_finite()) j["tau"] = w.length();
  if (w.is_zero()) j["tau"] = 0.0;
  if (w.is_infinite()) j["tau"] = "inf";
  return j;
}

json to_json(const WindowBounds& b) {
  return {{"lower", number(b.lower)}, {"upper", number(b.upper)}, {"delta", b.delta}};
}

json to_json(const CostCurve& c) {
  json fixed = json::array();
  for (std::size_t i = 0; i < c.ttl_grid.size(); ++i) {
    fixed.push_back({{"ttl", c.ttl_grid[i]}, {"mean_cost", c.fixed_mean_cost[i]}});
  }
  return {{"params", to_json(c.params)},
          {"costs", to_json(c.costs)},
          {"events", c.events},
          {"realizations", c.realizations},
          {"seed", c.seed},
          {"fixed", fixed},
          {"min_fixed_mean_cost", number(c.min_fixed_mean_cost())},
          {"optimal_mean_cost", c.optimal_mean_cost},
          {"optimized_ttl", number(c.optimized_ttl)},
          {"optimized_ttl_mean_cost", c.optimized_ttl_mean_cost},
          {"tau_fixed", number(c.tau_fixed)},
          {"tau_fixed_mean_cost", c.tau_fixed_mean_cost},
          {"tau_approx", number(c.tau_approx)},
          {"tau_approx_mean_cost", c.tau_approx_mean_cost},
          {"offline_mean_cost", c.offline_mean_cost}};
}

json to_json(const SavingsSummary& s) {
  json j{{"avg_cold_start_savings", s.avg_cold_start_savings},
         {"avg_memory_savings", s.avg_memory_savings},
         {"area", s.area},
         {"curves_cross", s.curves_cross}};
  if (!s.warning.empty()) j["warning"] = s.warning;
  return j;
}

json to_json(const PopulationCurves& p) {
  json curves = json::object();
  for (const auto& [name, curve] : p.curves) {
    json pts = json::array();
    for (const ParetoPoint& pt : curve) {
      pts.push_back({{"ccs", pt.cold_start_cost},
                     {"avg_cold_starts_per_app", pt.avg_cold_starts_per_app},
                     {"normalized_wasted_memory", pt.normalized_wasted_memory},
                     {"wasted_memory_time", pt.wasted_memory_time}});
    }
    curves[name] = pts;
  }
  json sav = json::object();
  for (const auto& [name, s] : p.savings) sav[name] = to_json(s);
  return {{"apps", p.apps}, {"default_waste", p.default_waste}, {"curves", curves}, {"savings", sav}};
}

json to_json(const TraceExperimentResult& r) {
  json apps = json::array();
  for (const AppAssessment& a : r.apps) {
    json j{{"id", a.id},
           {"fit_arrivals", a.fit_arrivals},
           {"gof_arrivals", a.gof_arrivals},
           {"eval_arrivals", a.eval_arrivals},
           {"treated", a.treated}};
    if (a.fit) j["fit"] = to_json(*a.fit);
    if (a.gof) j["gof"] = to_json(*a.gof);
    if (!a.excluded_reason.empty()) j["excluded"] = a.excluded_reason;
    apps.push_back(j);
  }
  return {{"treated", to_json(r.treated)}, {"all", to_json(r.all)}, {"apps", apps}, {"log", r.log}};
}

HawkesParams params_from_json(const json& j) {
  try {
    HawkesParams p{j.at("lambda0").get<double>(), j.at("alpha").get<double>(), j.at("beta").get<double>()};
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad parameter object: ") + e.what());
  }
}

json dataset_to_json(const TraceDataset& d) {
  json apps = json::object();
  for (const auto& [id, days] : d.apps) {
    json per_day = json::object();
    for (const auto& [day, h] : days) per_day[std::to_string(day)] = h.vector();
    apps[id] = per_day;
  }
  return {{"days", d.days}, {"apps", apps}};
}

TraceDataset dataset_from_json(const json& j) {
  TraceDataset d;
  try {
    d.days = j.at("days").get<std::vector<int>>();
    for (const auto& [id, per_day] : j.at("apps").items()) {
      for (const auto& [day, times] : per_day.items()) {
        d.apps[id][std::stoi(day)] = History(times.get<std::vector<double>>());
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("bad dataset JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("bad dataset JSON: ") + e.what());
  }
  return d;
}

void write_cost_curve_csv(std::ostream& os, const CostCurve& c) {
  os << "policy,ttl,mean_cost\n";
  for (std::size_t i = 0; i < c.ttl_grid.size(); ++i) {
    os << "fixed," << format_double(c.ttl_grid[i]) << ',' << format_double(c.fixed_mean_cost[i]) << '\n';
  }
  os << "optimal,," << format_double(c.optimal_mean_cost) << '\n';
  os << "optimized-ttl," << format_double(c.optimized_ttl) << ',' << format_double(c.optimized_ttl_mean_cost)
     << '\n';
  os << "tau-fixed," << format_double(c.tau_fixed) << ',' << format_double(c.tau_fixed_mean_cost) << '\n';
  os << "approx," << format_double(c.tau_approx) << ',' << format_double(c.tau_approx_mean_cost) << '\n';
  os << "offline-optimal,," << format_double(c.offline_mean_cost) << '\n';
}

void write_pareto_csv(std::ostream& os, const TraceExperimentResult& r) {
  os << "population,policy,ccs,avg_cold_starts_per_app,normalized_wasted_memory,wasted_memory_time\n";
  for (const auto& [label, pop] : {std::pair{"treated", &r.treated}, std::pair{"all", &r.all}}) {
    for (const auto& [name, curve] : pop->curves) {
      for (const ParetoPoint& p : curve) {
        os << label << ',' << name << ',' << format_double(p.cold_start_cost) << ','
           << format_double(p.avg_cold_starts_per_app) << ',' << format_double(p.normalized_wasted_memory)
           << ',' << format_double(p.wasted_memory_time) << '\n';
      }
    }
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed: " + path.string());
}

}  // namespace keepalive::io
