#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "keepalive/errors.hpp"
#include "keepalive/io.hpp"

using namespace keepalive;

TEST(Io, DoublesRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1440.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = u(rng);
    const std::string s = io::format_double(v);
    EXPECT_EQ(std::stod(s), v) << s;
    std::size_t digits = 0;
    for (char c : s) digits += (c >= '0' && c <= '9');
    EXPECT_LE(digits, 17u + 1u) << s;  // leading zero of 0.x does not count
  }
  EXPECT_EQ(io::format_double(INFINITY), "inf");
}

TEST(Io, TimestampsRoundTrip) {
  SimConfig cfg;
  cfg.seed = 3;
  cfg.stop = EventCount{500};
  const History h = simulate({0.01, 0.5, 1.0}, cfg);
  std::stringstream ss;
  io::write_timestamps(ss, h);
  EXPECT_EQ(io::read_timestamps(ss), h.vector());
}

TEST(Io, TimestampParsing) {
  std::istringstream in("time,extra\n1.5,a\n\n2\n");
  EXPECT_EQ(io::read_timestamps(in), (std::vector<double>{1.5, 2.0}));
  std::istringstream bad("1\nabc\n");
  EXPECT_THROW(io::read_timestamps(bad), DataError);
}

TEST(Io, DatasetJsonRoundTrip) {
  const auto apps = synth_population(3, 2);
  const TraceDataset d = synth_trace(apps, {7, 8}, 2);
  const auto j = io::dataset_to_json(d);
  const TraceDataset back = io::dataset_from_json(io::json::parse(j.dump()));
  EXPECT_EQ(back.apps, d.apps);
  EXPECT_EQ(back.days, d.days);
  EXPECT_EQ(io::dataset_to_json(back).dump(), j.dump());
}

TEST(Io, InfinityIsEncodedAsString) {
  EXPECT_EQ(io::number(INFINITY), "inf");
  EXPECT_TRUE(std::isinf(io::to_double(io::number(INFINITY))));
  EXPECT_EQ(io::to_json(OptimalWindow::infinite())["tau"], "inf");
}
