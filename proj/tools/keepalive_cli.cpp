// keepalive: command-line front end for the keep-alive policy toolkit.
//
// Every subcommand resolves its settings from built-in defaults, then an
// optional --config JSON file, then explicit flags, and echoes the result
// under "config" in its JSON output.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "keepalive/cost.hpp"
#include "keepalive/errors.hpp"
#include "keepalive/estimation.hpp"
#include "keepalive/evaluator.hpp"
#include "keepalive/io.hpp"
#include "keepalive/point_process.hpp"
#include "keepalive/policy.hpp"
#include "keepalive/trace.hpp"

namespace fs = std::filesystem;
using keepalive::io::json;
using namespace keepalive;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kData = 3, kNumeric = 4 };

const json kProcess{{"lambda0", 0.01}, {"alpha", 0.5}, {"beta", 1.0}};
const json kCosts{{"cp", 1.0}, {"ccs", 1.0}};

json merged(std::initializer_list<json> parts) {
  json out = json::object();
  for (const json& p : parts) out.update(p);
  return out;
}

std::string key_of(const std::string& flag) {
  std::string k = flag.substr(2);
  for (char& c : k) {
    if (c == '-') c = '_';
  }
  return k;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Converts a flag string to the JSON type of the default it overrides.
json parse_like(const json& like, const std::string& key, const std::string& raw) {
  try {
    std::size_t used = 0;
    json v;
    if (like.is_number_unsigned()) {
      if (!raw.empty() && raw[0] == '-') throw std::invalid_argument("negative");
      v = std::stoull(raw, &used);
    } else if (like.is_number_integer()) {
      v = std::stoll(raw, &used);
    } else if (like.is_number_float() || like.is_null()) {
      v = std::stod(raw, &used);
    } else if (like.is_array()) {
      json arr = json::array();
      const bool ints = !like.empty() && like[0].is_number_integer();
      for (const auto& item : split(raw, ',')) arr.push_back(parse_like(ints ? json(0) : json(0.0), key, item));
      return arr;
    } else {
      return raw;
    }
    if (used != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("--" + key + ": cannot parse '" + raw + "'");
  }
}

struct Command {
  CLI::App* app = nullptr;
  json defaults;
  std::map<std::string, std::optional<std::string>> raw;  // key -> flag text
  std::map<std::string, bool> flags;                      // boolean switches
  std::string config_path;
  std::function<int(const json&)> run;

  Command(CLI::App& parent, const std::string& name, const std::string& help, json defs)
      : app(parent.add_subcommand(name, help)), defaults(std::move(defs)) {
    app->add_option("--config", config_path, "JSON file of settings; flags override it");
  }

  void option(const std::string& flag, const std::string& help) {
    const std::string key = key_of(flag);
    if (!defaults.contains(key)) throw std::logic_error("no default for " + key);
    raw[key];
    std::string text = help;
    if (!defaults[key].is_null()) text += " [" + defaults[key].dump() + "]";
    app->add_option_function<std::string>(flag, [this, key](const std::string& v) { raw[key] = v; }, text);
  }

  void flag(const std::string& flag, const std::string& help) {
    const std::string key = key_of(flag);
    flags[key] = false;
    app->add_flag_function(flag, [this, key](std::int64_t n) { flags[key] = n > 0; }, help);
  }

  json resolve() const {
    json cfg = defaults;
    if (!config_path.empty()) {
      const json file = io::read_json_file(config_path);
      if (!file.is_object()) throw ConfigError(config_path + ": expected a JSON object");
      for (const auto& [k, v] : file.items()) {
        if (!cfg.contains(k)) throw ConfigError(config_path + ": unknown setting '" + k + "'");
        cfg[k] = v;
      }
    }
    for (const auto& [key, value] : raw) {
      if (value) cfg[key] = parse_like(defaults[key], key, *value);
    }
    for (const auto& [key, on] : flags) {
      if (on) cfg[key] = true;
    }
    return cfg;
  }
};

double num(const json& cfg, const std::string& key) {
  const json& v = cfg.at(key);
  try {
    return io::to_double(v);
  } catch (const ConfigError&) {
    throw ConfigError("setting '" + key + "' must be a number");
  }
}

std::uint64_t unsigned_of(const json& cfg, const std::string& key) {
  const json& v = cfg.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError("setting '" + key + "' must be a non-negative integer");
}

int int_of(const json& cfg, const std::string& key) {
  const json& v = cfg.at(key);
  if (!v.is_number_integer()) throw ConfigError("setting '" + key + "' must be an integer");
  return v.get<int>();
}

std::string str(const json& cfg, const std::string& key) {
  const json& v = cfg.at(key);
  if (!v.is_string()) throw ConfigError("setting '" + key + "' must be a string");
  return v.get<std::string>();
}

HawkesParams process_of(const json& cfg) {
  HawkesParams p{num(cfg, "lambda0"), num(cfg, "alpha"), num(cfg, "beta")};
  p.validate();
  return p;
}

CostParams costs_of(const json& cfg) {
  CostParams c{num(cfg, "cp"), num(cfg, "ccs")};
  c.validate();
  return c;
}

std::vector<double> require_history(const json& cfg) {
  const std::string path = str(cfg, "history");
  if (path.empty()) throw ConfigError("--history is required (CSV of arrival times, one per line)");
  return io::read_timestamps(fs::path(path));
}

Placement placement_of(const json& cfg) {
  const std::string p = str(cfg, "placement");
  if (p == "mid") return Placement::MidOffset;
  if (p == "uniform") return Placement::Uniform;
  throw ConfigError("--placement must be 'mid' or 'uniform'");
}

std::vector<int> days_of(const json& cfg) {
  const json& v = cfg.at("days");
  if (!v.is_array() || v.empty()) throw ConfigError("--days must be a non-empty list of integers");
  std::vector<int> days;
  for (const json& d : v) {
    if (!d.is_number_integer()) throw ConfigError("--days must contain integers");
    days.push_back(d.get<int>());
  }
  return days;
}

// Writes `j` to --out when given, otherwise to stdout.
void emit_json(const json& cfg, const json& j) {
  const std::string text = j.dump(2) + "\n";
  const std::string out = str(cfg, "out");
  if (out.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(out, text);
  }
}

TraceDataset dataset_of(const json& cfg, const std::vector<int>& days) {
  const std::string path = str(cfg, "trace");
  if (path.empty()) {
    throw ConfigError("--trace is required (dataset JSON from 'ingest'/'synth', a directory of day CSVs, or CSV files)");
  }
  const ExpandOptions expand{placement_of(cfg), unsigned_of(cfg, "seed")};
  std::vector<TraceFile> files;
  if (fs::is_directory(path)) {
    files = discover_day_files(path, days);
    if (files.empty()) throw DataError(path + ": no day files (names like ...d08.csv) for the requested days");
  } else if (fs::path(path).extension() == ".json") {
    return io::dataset_from_json(io::read_json_file(path));
  } else {
    // Comma-separated list of CSVs; each name must carry its day (...dNN.csv) unless long format.
    for (const auto& f : split(path, ',')) {
      const auto found = discover_day_files(fs::path(f).parent_path().empty() ? "." : fs::path(f).parent_path(), days);
      bool matched = false;
      for (const auto& tf : found) {
        if (fs::equivalent(tf.path, f)) {
          files.push_back(tf);
          matched = true;
        }
      }
      if (!matched) files.push_back(TraceFile{f, 0});
    }
  }
  TraceSchema schema;
  const std::string format = str(cfg, "format");
  if (format == "long") {
    schema.format = TraceFormat::Long;
  } else if (format != "wide") {
    throw ConfigError("--format must be 'wide' or 'long'");
  }
  return load_trace(files, schema, expand);
}

// --- subcommands ------------------------------------------------------------

int cmd_simulate(const json& cfg) {
  const HawkesParams p = process_of(cfg);
  SimConfig sim;
  sim.seed = unsigned_of(cfg, "seed");
  if (!cfg.at("horizon").is_null()) {
    sim.stop = Horizon{num(cfg, "horizon")};
  } else {
    sim.stop = EventCount{unsigned_of(cfg, "events")};
  }
  const History h = simulate(p, sim);
  std::ostringstream csv;
  io::write_timestamps(csv, h);
  const std::string out = str(cfg, "out");
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    io::write_text_file(out, csv.str());
    io::write_text_file(out + ".json", json{{"config", cfg}, {"arrivals", h.size()}}.dump(2) + "\n");
  }
  return kOk;
}

int cmd_window(const json& cfg) {
  const HawkesParams p = process_of(cfg);
  const CostParams c = costs_of(cfg);
  const bool empty = cfg.at("empty").get<bool>();
  std::vector<double> history;
  if (!str(cfg, "history").empty()) history = require_history(cfg);
  if (history.empty() && !empty) {
    throw ConfigError("empty history: pass --history with at least one arrival, or --empty");
  }
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i] < history[i - 1]) throw DataError("history is not sorted");
  }
  const std::size_t truncation = unsigned_of(cfg, "truncation");
  const OptimalWindow w =
      history.empty() ? empty_history_window(p, c) : optimal_hawkes_window(p, history, c, truncation);

  json j{{"config", cfg}, {"window", io::to_json(w)}, {"history_size", history.size()}};
  j["tau_empty"] = io::to_json(empty_history_window(p, c));
  j["tau_fixed"] = io::number(tau_fixed(c));
  j["tau_approx"] = io::number(tau_approx(p, c));
  if (!history.empty() && c.ratio() > p.lambda0) {
    j["bounds"] = io::to_json(window_bounds(p, history, c));
  } else {
    j["bounds"] = nullptr;
  }
  emit_json(cfg, j);
  return kOk;
}

int cmd_fit(const json& cfg) {
  const std::vector<double> arrivals = require_history(cfg);
  FitOptions fo;
  fo.seed = unsigned_of(cfg, "seed");
  fo.restarts = unsigned_of(cfg, "restarts");
  const FitResult f = fit(arrivals, std::nullopt, fo);
  emit_json(cfg, {{"config", cfg}, {"fit", io::to_json(f)}, {"arrivals", arrivals.size()}});
  return kOk;
}

HawkesParams params_for_gof(const json& cfg) {
  const std::string path = str(cfg, "params_file");
  if (path.empty()) return process_of(cfg);
  const json j = io::read_json_file(path);
  if (j.contains("fit")) return io::params_from_json(j.at("fit").at("params"));
  if (j.contains("params")) return io::params_from_json(j.at("params"));
  return io::params_from_json(j);
}

int cmd_gof(const json& cfg) {
  const HawkesParams p = params_for_gof(cfg);
  const std::vector<double> arrivals = require_history(cfg);
  const GofResult g = ks_test_exp1(residuals(p, arrivals));
  const double level = num(cfg, "level");
  emit_json(cfg, {{"config", cfg},
                  {"params", io::to_json(p)},
                  {"gof", io::to_json(g)},
                  {"passes", g.p_value >= level}});
  return kOk;
}

int cmd_sweep(const json& cfg) {
  CostCurveOptions o;
  o.events = unsigned_of(cfg, "events");
  o.realizations = unsigned_of(cfg, "realizations");
  o.grid_points = unsigned_of(cfg, "grid_points");
  o.seed = unsigned_of(cfg, "seed");
  o.truncation = unsigned_of(cfg, "truncation");
  o.threads = static_cast<unsigned>(unsigned_of(cfg, "threads"));
  const CostCurve curve = cost_curve_experiment(process_of(cfg), costs_of(cfg), o);
  const json summary{{"config", cfg}, {"curve", io::to_json(curve)}};
  const std::string out = str(cfg, "out");
  if (out.empty()) {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::ostringstream csv;
    io::write_cost_curve_csv(csv, curve);
    io::write_text_file(fs::path(out) / "cost_curve.csv", csv.str());
    io::write_text_file(fs::path(out) / "summary.json", summary.dump(2) + "\n");
  }
  return kOk;
}

PolicySpec policy_of(const json& cfg) {
  const std::string name = str(cfg, "policy");
  if (name == "fixed") return policies::FixedTtl{num(cfg, "ttl")};
  if (name == "prewarm") return policies::PrewarmTtl{num(cfg, "prewarm"), num(cfg, "ttl")};
  if (name == "optimal") return policies::OptimalHawkes{unsigned_of(cfg, "truncation")};
  if (name == "optimized-ttl") return policies::OptimizedTtl{num(cfg, "ttl")};
  if (name == "approx") return policies::Approx{};
  if (name == "offline-optimal") return policies::OfflineOptimal{};
  throw ConfigError("--policy must be one of fixed, prewarm, optimal, optimized-ttl, approx, offline-optimal");
}

int cmd_evaluate(const json& cfg) {
  const PolicySpec policy = policy_of(cfg);
  const CostParams c = costs_of(cfg);
  const std::vector<double> arrivals = require_history(cfg);
  std::optional<HawkesParams> params;
  if (needs_params(policy)) params = process_of(cfg);
  ReplayOptions ro;
  if (!cfg.at("horizon").is_null()) ro.horizon = num(cfg, "horizon");
  const ReplayMetrics m = replay(arrivals, policy, c, params, ro);
  emit_json(cfg, {{"config", cfg}, {"policy", policy_name(policy)}, {"metrics", io::to_json(m, true)}});
  return kOk;
}

int cmd_pareto(const json& cfg) {
  TraceExperimentConfig tc;
  tc.fit_day = int_of(cfg, "fit_day");
  tc.gof_day = int_of(cfg, "gof_day");
  tc.eval_day = int_of(cfg, "eval_day");
  tc.ccs_grid = cfg.at("ccs").get<std::vector<double>>();
  tc.keep_cost = num(cfg, "cp");
  tc.treat_fraction = num(cfg, "treat_frac");
  tc.default_ttl = num(cfg, "default_ttl");
  tc.truncation = unsigned_of(cfg, "truncation");
  tc.seed = unsigned_of(cfg, "seed");
  tc.fit.seed = tc.seed;
  tc.threads = static_cast<unsigned>(unsigned_of(cfg, "threads"));
  const std::string untreated = str(cfg, "untreated");
  if (untreated == "matched") {
    tc.untreated = UntreatedPolicy::MatchedFixed;
  } else if (untreated == "default") {
    tc.untreated = UntreatedPolicy::Default;
  } else {
    throw ConfigError("--untreated must be 'matched' or 'default'");
  }

  const TraceDataset data = dataset_of(cfg, {tc.gof_day, tc.fit_day, tc.eval_day});
  const TraceExperimentResult r = trace_experiment(data, tc);
  for (const auto& line : r.log) std::cerr << line << "\n";

  json summary{{"config", cfg}, {"treated", io::to_json(r.treated)}, {"all", io::to_json(r.all)}, {"log", r.log}};
  const std::string out = str(cfg, "out");
  if (out.empty()) {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::ostringstream csv;
    io::write_pareto_csv(csv, r);
    io::write_text_file(fs::path(out) / "pareto.csv", csv.str());
    io::write_text_file(fs::path(out) / "summary.json", summary.dump(2) + "\n");
    io::write_text_file(fs::path(out) / "apps.json", io::to_json(r).at("apps").dump(2) + "\n");
  }
  return kOk;
}

int cmd_ingest(const json& cfg) {
  const TraceDataset d = dataset_of(cfg, days_of(cfg));
  emit_json(cfg, {{"config", cfg}, {"dataset", io::dataset_to_json(d)}});
  return kOk;
}

int cmd_synth(const json& cfg) {
  const std::uint64_t seed = unsigned_of(cfg, "seed");
  const auto apps = synth_population(unsigned_of(cfg, "apps"), seed);
  const TraceDataset d = synth_trace(apps, days_of(cfg), seed, ExpandOptions{placement_of(cfg), seed});
  json truth = json::object();
  for (const SynthApp& a : apps) truth[a.id] = io::to_json(a.params);
  json j = io::dataset_to_json(d);
  j["config"] = cfg;
  j["params"] = truth;
  emit_json(cfg, j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Keep-alive policies for serverless cold starts under Hawkes arrivals"};
  cli.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](const std::string& name, const std::string& help, json defaults,
                 std::function<int(const json&)> run) -> Command& {
    commands.push_back(std::make_unique<Command>(cli, name, help, std::move(defaults)));
    commands.back()->run = std::move(run);
    return *commands.back();
  };
  auto process_flags = [](Command& c) {
    c.option("--lambda0", "background rate (events/min)");
    c.option("--alpha", "excitation jump");
    c.option("--beta", "excitation decay rate");
  };
  auto cost_flags = [](Command& c) {
    c.option("--cp", "keep-alive cost per minute");
    c.option("--ccs", "cold-start cost");
  };

  {
    auto& c = add("simulate", "simulate Hawkes arrivals (CSV of timestamps)",
                  merged({kProcess, {{"events", 600u}, {"horizon", nullptr}, {"seed", 0u}, {"out", ""}}}),
                  cmd_simulate);
    process_flags(c);
    c.option("--events", "number of arrivals to generate");
    c.option("--horizon", "simulate on [0, horizon] instead of a fixed count");
    c.option("--seed", "RNG seed");
    c.option("--out", "output CSV (stdout if omitted)");
  }
  {
    auto& c = add("window", "optimal keep-alive window for a history",
                  merged({kProcess, kCosts,
                          {{"history", ""}, {"empty", false}, {"truncation", 200u}, {"out", ""}}}),
                  cmd_window);
    process_flags(c);
    cost_flags(c);
    c.option("--history", "CSV of past arrival times; the last one is the current arrival");
    c.flag("--empty", "no history beyond the current arrival");
    c.option("--truncation", "most recent arrivals used");
    c.option("--out", "output JSON (stdout if omitted)");
  }
  {
    auto& c = add("fit", "maximum-likelihood Hawkes fit",
                  json{{"history", ""}, {"seed", 0u}, {"restarts", 5u}, {"out", ""}}, cmd_fit);
    c.option("--history", "CSV of arrival times");
    c.option("--seed", "seed for restart jitter");
    c.option("--restarts", "optimizer starts");
    c.option("--out", "output JSON (stdout if omitted)");
  }
  {
    auto& c = add("gof", "KS test of time-changed residuals against Exp(1)",
                  merged({kProcess, {{"history", ""}, {"params_file", ""}, {"level", 0.05}, {"out", ""}}}),
                  cmd_gof);
    process_flags(c);
    c.option("--params-file", "JSON with fitted parameters (output of 'fit'); overrides --lambda0/--alpha/--beta");
    c.option("--history", "CSV of arrival times");
    c.option("--level", "significance level for 'passes'");
    c.option("--out", "output JSON (stdout if omitted)");
  }
  {
    auto& c = add("sweep", "Monte-Carlo cost of fixed TTLs against the optimal policy",
                  merged({kProcess, kCosts,
                          {{"events", 600u},
                           {"realizations", 100u},
                           {"grid_points", 50u},
                           {"seed", 0u},
                           {"truncation", 200u},
                           {"threads", 1u},
                           {"out", ""}}}),
                  cmd_sweep);
    process_flags(c);
    cost_flags(c);
    c.option("--events", "arrivals per realization");
    c.option("--realizations", "number of realizations");
    c.option("--grid-points", "TTL grid size over [0, 2 c_cs/c_p]");
    c.option("--seed", "master seed");
    c.option("--truncation", "most recent arrivals used by the optimal policy");
    c.option("--threads", "worker cap");
    c.option("--out", "output directory (cost_curve.csv, summary.json); stdout JSON if omitted");
  }
  {
    auto& c = add("evaluate", "replay one arrival stream under a policy",
                  merged({kProcess, kCosts,
                          {{"history", ""},
                           {"policy", "fixed"},
                           {"ttl", 10.0},
                           {"prewarm", 0.0},
                           {"horizon", nullptr},
                           {"truncation", 200u},
                           {"out", ""}}}),
                  cmd_evaluate);
    process_flags(c);
    cost_flags(c);
    c.option("--history", "CSV of arrival times");
    c.option("--policy", "fixed | prewarm | optimal | optimized-ttl | approx | offline-optimal");
    c.option("--ttl", "window length for fixed, prewarm and optimized-ttl");
    c.option("--prewarm", "delay before the window (prewarm policy)");
    c.option("--horizon", "end of observation; trailing cached time counts as waste");
    c.option("--truncation", "most recent arrivals used by the optimal policy");
    c.option("--out", "output JSON (stdout if omitted)");
  }
  {
    auto& c = add("pareto", "trace protocol: fit, rank by fit quality, treat, evaluate",
                  json{{"trace", ""},
                       {"format", "wide"},
                       {"placement", "mid"},
                       {"fit_day", 8},
                       {"gof_day", 7},
                       {"eval_day", 9},
                       {"ccs", {5.0, 10.0, 20.0, 30.0, 45.0, 60.0, 90.0, 120.0}},
                       {"cp", 1.0},
                       {"treat_frac", 0.25},
                       {"default_ttl", 10.0},
                       {"untreated", "matched"},
                       {"truncation", 200u},
                       {"seed", 0u},
                       {"threads", 1u},
                       {"out", ""}},
                  cmd_pareto);
    c.option("--trace", "dataset JSON, directory of day CSVs, or comma-separated CSV files");
    c.option("--format", "CSV layout: wide (per-minute columns) or long");
    c.option("--placement", "sub-minute placement: mid or uniform");
    c.option("--fit-day", "day used for fitting");
    c.option("--gof-day", "day used for goodness-of-fit ranking");
    c.option("--eval-day", "day replayed");
    c.option("--ccs", "comma-separated cold-start cost grid");
    c.option("--cp", "keep-alive cost per minute");
    c.option("--treat-frac", "fraction of apps treated, best fits first");
    c.option("--default-ttl", "normalization policy window (minutes)");
    c.option("--untreated", "policy for untreated apps: matched (c_cs/c_p) or default");
    c.option("--truncation", "most recent arrivals used by the optimal policy");
    c.option("--seed", "master seed");
    c.option("--threads", "worker cap");
    c.option("--out", "output directory (pareto.csv, summary.json, apps.json); stdout JSON if omitted");
  }
  {
    auto& c = add("ingest", "convert trace CSVs into dataset JSON",
                  json{{"trace", ""}, {"format", "wide"}, {"placement", "mid"}, {"days", {7, 8, 9}}, {"seed", 0u}, {"out", ""}},
                  cmd_ingest);
    c.option("--trace", "directory of day CSVs or comma-separated CSV files");
    c.option("--format", "wide or long");
    c.option("--placement", "mid or uniform");
    c.option("--days", "comma-separated days to keep");
    c.option("--seed", "seed for uniform placement");
    c.option("--out", "output JSON (stdout if omitted)");
  }
  {
    auto& c = add("synth", "synthetic Hawkes trace dataset (JSON)",
                  json{{"apps", 200u}, {"days", {7, 8, 9}}, {"seed", 0u}, {"placement", "mid"}, {"out", ""}},
                  cmd_synth);
    c.option("--apps", "number of applications");
    c.option("--days", "comma-separated days");
    c.option("--seed", "master seed");
    c.option("--placement", "mid or uniform");
    c.option("--out", "output JSON (stdout if omitted)");
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    for (const auto& c : commands) {
      if (c->app->parsed()) return c->run(c->resolve());
    }
    return kConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}
