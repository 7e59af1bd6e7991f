#include "keepalive/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

#include "keepalive/errors.hpp"
#include "keepalive/seed.hpp"

namespace keepalive {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                        : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Collects row-level problems and throws them together.
class Problems {
 public:
  explicit Problems(std::string file) : file_(std::move(file)) {}
  void add(std::size_t line, const std::string& what) {
    ++count_;
    if (count_ <= kShown) msg_ << "\n  " << file_ << ":" << line << ": " << what;
  }
  void raise_if_any() const {
    if (count_ == 0) return;
    std::ostringstream out;
    out << "trace load failed with " << count_ << " problem(s):" << msg_.str();
    if (count_ > kShown) out << "\n  ... " << (count_ - kShown) << " more";
    throw DataError(out.str());
  }

 private:
  static constexpr std::size_t kShown = 50;
  std::string file_;
  std::ostringstream msg_;
  std::size_t count_ = 0;
};

std::optional<std::size_t> find_column(const std::vector<std::string_view>& header,
                                       const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

void load_wide(const TraceFile& file, std::istream& in, const TraceSchema& schema,
               BinnedTrace& out, std::set<std::tuple<std::string, std::string, int>>& seen) {
  Problems problems(file.path.string());
  std::string line;
  if (!std::getline(in, line)) return;  // empty file
  const auto header = split(line);
  const auto app_col = find_column(header, schema.app_column);
  const auto fn_col = find_column(header, schema.function_column);
  if (!app_col) problems.add(1, "missing column '" + schema.app_column + "'");
  if (!fn_col) problems.add(1, "missing column '" + schema.function_column + "'");
  std::vector<std::pair<std::size_t, int>> minute_cols;  // (column, minute index)
  for (std::size_t i = 0; i < header.size(); ++i) {
    int m = 0;
    if (parse_int(header[i], m) && m >= 1 && m <= schema.minutes) minute_cols.emplace_back(i, m - 1);
  }
  if (minute_cols.empty()) problems.add(1, "no per-minute count columns (1.." +
                                               std::to_string(schema.minutes) + ")");
  problems.raise_if_any();

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      problems.add(lineno, "expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
      continue;
    }
    const std::string app(fields[*app_col]);
    const std::string fn(fields[*fn_col]);
    if (app.empty()) {
      problems.add(lineno, "empty app id");
      continue;
    }
    if (!seen.emplace(app, fn, file.day).second) {
      problems.add(lineno, "duplicate row for app '" + app + "' function '" + fn + "' day " +
                               std::to_string(file.day));
      continue;
    }
    MinuteBins& bins = out.apps[app][file.day];
    bins.resize(static_cast<std::size_t>(schema.minutes), 0);
    for (const auto& [col, minute] : minute_cols) {
      long long count = 0;
      if (!parse_int(fields[col], count)) {
        problems.add(lineno, "non-integer count '" + std::string(fields[col]) + "' in column " +
                                 std::string(header[col]));
        continue;
      }
      if (count < 0) {
        problems.add(lineno, "negative count " + std::to_string(count) + " in column " +
                                 std::string(header[col]));
        continue;
      }
      bins[static_cast<std::size_t>(minute)] += static_cast<std::uint32_t>(count);
    }
  }
  problems.raise_if_any();
}

void load_long(const TraceFile& file, std::istream& in, const TraceSchema& schema,
               BinnedTrace& out, std::set<std::tuple<std::string, std::string, int, int>>& seen) {
  Problems problems(file.path.string());
  std::string line;
  if (!std::getline(in, line)) return;
  const auto header = split(line);
  const auto app_col = find_column(header, schema.app_column);
  const auto fn_col = find_column(header, schema.function_column);
  const auto day_col = find_column(header, schema.day_column);
  const auto min_col = find_column(header, schema.minute_column);
  const auto cnt_col = find_column(header, schema.count_column);
  for (const auto& [col, name] :
       {std::pair{app_col, schema.app_column}, std::pair{fn_col, schema.function_column},
        std::pair{day_col, schema.day_column}, std::pair{min_col, schema.minute_column},
        std::pair{cnt_col, schema.count_column}}) {
    if (!col) problems.add(1, "missing column '" + name + "'");
  }
  problems.raise_if_any();

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      problems.add(lineno, "expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
      continue;
    }
    int day = 0;
    int minute = 0;
    long long count = 0;
    if (!parse_int(fields[*day_col], day)) {
      problems.add(lineno, "non-integer day");
      continue;
    }
    if (!parse_int(fields[*min_col], minute) || minute < 0 || minute >= schema.minutes) {
      problems.add(lineno, "minute out of range [0, " + std::to_string(schema.minutes) + ")");
      continue;
    }
    if (!parse_int(fields[*cnt_col], count)) {
      problems.add(lineno, "non-integer count");
      continue;
    }
    if (count < 0) {
      problems.add(lineno, "negative count " + std::to_string(count));
      continue;
    }
    const std::string app(fields[*app_col]);
    const std::string fn(fields[*fn_col]);
    if (!seen.emplace(app, fn, day, minute).second) {
      problems.add(lineno, "duplicate row for app '" + app + "' function '" + fn + "' day " +
                               std::to_string(day) + " minute " + std::to_string(minute));
      continue;
    }
    MinuteBins& bins = out.apps[app][day];
    bins.resize(static_cast<std::size_t>(schema.minutes), 0);
    bins[static_cast<std::size_t>(minute)] += static_cast<std::uint32_t>(count);
  }
  problems.raise_if_any();
}

}  // namespace

const History& TraceDataset::arrivals(const std::string& app, int day) const {
  static const History kEmpty;
  const auto it = apps.find(app);
  if (it == apps.end()) return kEmpty;
  const auto jt = it->second.find(day);
  return jt == it->second.end() ? kEmpty : jt->second;
}

BinnedTrace load_binned(const std::vector<TraceFile>& files, const TraceSchema& schema) {
  if (schema.minutes < 1) throw ConfigError("trace schema: minutes must be >= 1");
  BinnedTrace out;
  std::set<std::tuple<std::string, std::string, int>> seen_wide;
  std::set<std::tuple<std::string, std::string, int, int>> seen_long;
  std::set<int> days;
  for (const TraceFile& f : files) {
    std::ifstream in(f.path);
    if (!in) throw DataError("cannot open trace file " + f.path.string());
    if (schema.format == TraceFormat::Wide) {
      load_wide(f, in, schema, out, seen_wide);
      days.insert(f.day);
    } else {
      load_long(f, in, schema, out, seen_long);
    }
  }
  for (const auto& [app, per_day] : out.apps) {
    for (const auto& [day, bins] : per_day) days.insert(day);
  }
  out.days.assign(days.begin(), days.end());
  return out;
}

std::vector<TraceFile> discover_day_files(const std::filesystem::path& dir,
                                          const std::vector<int>& days) {
  if (!std::filesystem::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  static const std::regex kDay(R"(d(\d+)\.csv$)");
  std::vector<TraceFile> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_search(name, m, kDay)) continue;
    const int day = std::stoi(m[1].str());
    if (days.empty() || std::find(days.begin(), days.end(), day) != days.end()) {
      out.push_back({entry.path(), day});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.day < b.day; });
  for (int d : days) {
    if (std::none_of(out.begin(), out.end(), [d](const auto& f) { return f.day == d; })) {
      throw DataError("no trace file for day " + std::to_string(d) + " in " + dir.string());
    }
  }
  return out;
}

History expand_bins(const MinuteBins& bins, const ExpandOptions& opts) {
  std::vector<double> out;
  std::size_t total = 0;
  for (auto c : bins) total += c;
  out.reserve(total);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> scratch;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const std::uint32_t k = bins[b];
    if (k == 0) continue;
    const auto base = static_cast<double>(b);
    if (opts.placement == Placement::MidOffset) {
      for (std::uint32_t j = 0; j < k; ++j) out.push_back(base + (j + 0.5) / k);
    } else {
      scratch.clear();
      for (std::uint32_t j = 0; j < k; ++j) scratch.push_back(base + unif(rng));
      std::sort(scratch.begin(), scratch.end());
      out.insert(out.end(), scratch.begin(), scratch.end());
    }
  }
  return History(std::move(out));
}

MinuteBins bin_arrivals(const History& arrivals, int minutes) {
  MinuteBins bins(static_cast<std::size_t>(minutes), 0);
  for (double t : arrivals.times()) {
    if (t < 0.0 || t >= minutes) continue;
    ++bins[static_cast<std::size_t>(std::floor(t))];
  }
  return bins;
}

TraceDataset expand(const BinnedTrace& binned, const ExpandOptions& opts) {
  TraceDataset out;
  out.days = binned.days;
  std::uint64_t index = 0;
  for (const auto& [app, per_day] : binned.apps) {
    auto& dst = out.apps[app];
    for (const auto& [day, bins] : per_day) {
      ExpandOptions o = opts;
      o.seed = derive_seed(opts.seed, {index, static_cast<std::uint64_t>(day)});
      dst.emplace(day, expand_bins(bins, o));
    }
    ++index;
  }
  return out;
}

TraceDataset load_trace(const std::vector<TraceFile>& files, const TraceSchema& schema,
                        const ExpandOptions& opts) {
  return expand(load_binned(files, schema), opts);
}

TraceDataset synth_trace(const std::vector<SynthApp>& apps, const std::vector<int>& days,
                         std::uint64_t seed, const ExpandOptions& opts) {
  BinnedTrace binned;
  std::set<int> day_set(days.begin(), days.end());
  binned.days.assign(day_set.begin(), day_set.end());
  std::uint64_t index = 0;
  for (const SynthApp& app : apps) {
    for (int day : binned.days) {
      SimConfig sim;
      sim.seed = derive_seed(seed, {index, static_cast<std::uint64_t>(day)});
      sim.stop = Horizon{static_cast<double>(kMinutesPerDay)};
      const History h = simulate(app.params, sim);
      binned.apps[app.id][day] = bin_arrivals(h);
    }
    ++index;
  }
  ExpandOptions o = opts;
  o.seed = derive_seed(seed, {0xb1b5ULL});
  return expand(binned, o);
}

std::vector<SynthApp> synth_population(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::log(lo) + unif(rng) * (std::log(hi) - std::log(lo)));
  };
  std::vector<SynthApp> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SynthApp app;
    char id[32];
    std::snprintf(id, sizeof id, "app%04zu", i);
    app.id = id;
    app.params.lambda0 = log_uniform(0.003, 0.1);
    app.params.beta = log_uniform(0.1, 2.0);
    app.params.alpha = (0.3 + 0.55 * unif(rng)) * app.params.beta;
    out.push_back(app);
  }
  return out;
}

}  // namespace keepalive
