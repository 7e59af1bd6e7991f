#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "keepalive/point_process.hpp"

namespace keepalive {

inline constexpr int kMinutesPerDay = 1440;

// How k arrivals are placed inside a one-minute bin [b, b+1).
enum class Placement {
  MidOffset,  // b + (j + 0.5)/k, deterministic
  Uniform,    // sorted uniform draws, seeded
};

using MinuteBins = std::vector<std::uint32_t>;

// Per-application arrival histories (minutes since day start), keyed by day.
struct TraceDataset {
  std::map<std::string, std::map<int, History>> apps;
  std::vector<int> days;  // sorted, unique

  std::size_t app_count() const { return apps.size(); }
  // Arrivals of `app` on `day`; empty when absent.
  const History& arrivals(const std::string& app, int day) const;
};

// Per-application per-minute counts, summed over the app's functions.
struct BinnedTrace {
  std::map<std::string, std::map<int, MinuteBins>> apps;
  std::vector<int> days;
};

enum class TraceFormat {
  Wide,  // app, function, then one count column per minute (Azure public schema)
  Long,  // app, function, day, minute (0-based), count
};

struct TraceSchema {
  TraceFormat format = TraceFormat::Wide;
  std::string app_column = "HashApp";
  std::string function_column = "HashFunction";
  // Long format only.
  std::string day_column = "day";
  std::string minute_column = "minute";
  std::string count_column = "count";
  // Wide format: minute columns are headers "1".."1440" (1-based).
  int minutes = kMinutesPerDay;
};

struct TraceFile {
  std::filesystem::path path;
  int day = 0;  // ignored for the long format, which carries its own day column
};

// Parses trace CSVs.  Throws DataError listing every malformed row (line
// numbers), missing column, negative or non-integer count, and duplicate
// (app, function, day) row.
BinnedTrace load_binned(const std::vector<TraceFile>& files, const TraceSchema& schema = {});

// Finds files named like "...d07.csv" in a directory and keeps the requested days.
std::vector<TraceFile> discover_day_files(const std::filesystem::path& dir,
                                          const std::vector<int>& days);

struct ExpandOptions {
  Placement placement = Placement::MidOffset;
  std::uint64_t seed = 0;  // Uniform placement only
};

History expand_bins(const MinuteBins& bins, const ExpandOptions& opts = {});
// Counts per minute over [0, minutes); arrivals outside the day are dropped.
MinuteBins bin_arrivals(const History& arrivals, int minutes = kMinutesPerDay);

TraceDataset expand(const BinnedTrace& binned, const ExpandOptions& opts = {});

TraceDataset load_trace(const std::vector<TraceFile>& files, const TraceSchema& schema = {},
                        const ExpandOptions& opts = {});

struct SynthApp {
  std::string id;
  HawkesParams params;
};

// Simulates each app for each day, bins to minutes and re-expands, so the
// output has exactly the shape of a loaded trace.
TraceDataset synth_trace(const std::vector<SynthApp>& apps, const std::vector<int>& days,
                         std::uint64_t seed, const ExpandOptions& opts = {});

// Seeded population of stationary Hawkes apps with varied rates and clustering.
std::vector<SynthApp> synth_population(std::size_t count, std::uint64_t seed);

}  // namespace keepalive
