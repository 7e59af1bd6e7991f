#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "keepalive/errors.hpp"
#include "keepalive/trace.hpp"

using namespace keepalive;
namespace fs = std::filesystem;

namespace {

class TraceFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("keepalive_trace_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

TraceSchema two_minutes() {
  TraceSchema s;
  s.minutes = 2;
  return s;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_F(TraceFiles, FunctionsOfOneAppAreSummed) {
  const auto p = write("d01.csv", "HashOwner,HashApp,HashFunction,Trigger,1,2\no,a,f1,http,1,0\no,a,f2,timer,0,2\n");
  const BinnedTrace b = load_binned({{p, 1}}, two_minutes());
  ASSERT_EQ(b.apps.size(), 1u);
  EXPECT_EQ(b.apps.at("a").at(1), (MinuteBins{1, 2}));
  EXPECT_EQ(b.days, std::vector<int>{1});
}

TEST_F(TraceFiles, EmptyFileGivesEmptyDataset) {
  const auto p = write("d01.csv", "");
  EXPECT_EQ(load_trace({{p, 1}}).app_count(), 0u);
}

TEST_F(TraceFiles, CountExpandsInsideItsMinute) {
  std::string header = "HashApp,HashFunction";
  std::string row = "a,f";
  for (int m = 1; m <= kMinutesPerDay; ++m) {
    header += "," + std::to_string(m);
    row += m == 8 ? ",3" : ",0";
  }
  const auto p = write("d09.csv", header + "\n" + row + "\n");
  const TraceDataset d = load_trace({{p, 9}});
  const History& h = d.arrivals("a", 9);
  ASSERT_EQ(h.size(), 3u);
  for (double t : h.times()) {
    EXPECT_GE(t, 7.0);
    EXPECT_LT(t, 8.0);
  }
  EXPECT_TRUE(d.arrivals("a", 8).empty());
  EXPECT_TRUE(d.arrivals("missing", 9).empty());
}

TEST_F(TraceFiles, ProblemsAreReportedWithLineNumbers) {
  const auto p = write("d01.csv",
                       "HashApp,HashFunction,1,2\n"
                       "a,f,1,0\n"
                       "a,g,-1,0\n"
                       "b,f,x,0\n"
                       "c,f,1\n"
                       "a,f,0,0\n");
  const std::string msg = error_of([&] { load_binned({{p, 1}}, two_minutes()); });
  EXPECT_NE(msg.find("4 problem(s)"), std::string::npos) << msg;
  EXPECT_NE(msg.find(":3: negative count"), std::string::npos) << msg;
  EXPECT_NE(msg.find(":4: non-integer count"), std::string::npos) << msg;
  EXPECT_NE(msg.find(":5: expected 4 fields"), std::string::npos) << msg;
  EXPECT_NE(msg.find(":6: duplicate row"), std::string::npos) << msg;
}

TEST_F(TraceFiles, MissingColumnIsReported) {
  const auto p = write("d01.csv", "App,HashFunction,1,2\na,f,1,0\n");
  EXPECT_NE(error_of([&] { load_binned({{p, 1}}, two_minutes()); }).find("missing column 'HashApp'"),
            std::string::npos);
}

TEST_F(TraceFiles, LongFormat) {
  const auto p = write("trace.csv",
                       "HashApp,HashFunction,day,minute,count\n"
                       "a,f,7,0,2\n"
                       "a,g,7,0,1\n"
                       "a,f,8,1439,1\n"
                       "b,f,8,3,1\n");
  TraceSchema s;
  s.format = TraceFormat::Long;
  const TraceDataset d = load_trace({{p, 0}}, s);
  EXPECT_EQ(d.days, (std::vector<int>{7, 8}));
  EXPECT_EQ(d.arrivals("a", 7).size(), 3u);
  EXPECT_EQ(d.arrivals("a", 8).vector(), std::vector<double>{1439.5});
  EXPECT_EQ(d.arrivals("b", 8).vector(), std::vector<double>{3.5});
}

TEST_F(TraceFiles, DiscoverDayFiles) {
  write("invocations_per_function_md.anon.d07.csv", "");
  write("invocations_per_function_md.anon.d08.csv", "");
  write("notes.txt", "");
  const auto files = discover_day_files(dir_, {8, 7});
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].day, 7);
  EXPECT_EQ(files[1].day, 8);
  EXPECT_THROW(discover_day_files(dir_, {9}), DataError);
}

TEST(ExpandBins, MidOffsetPlacement) {
  MinuteBins b(10, 0);
  b[5] = 1;
  EXPECT_EQ(expand_bins(b).vector(), std::vector<double>{5.5});
  EXPECT_EQ(expand_bins(MinuteBins{2}).vector(), (std::vector<double>{0.25, 0.75}));
  EXPECT_TRUE(expand_bins(MinuteBins(1440, 0)).empty());
}

TEST(ExpandBins, UniformPlacementStaysInBins) {
  const MinuteBins b{0, 5, 0, 3};
  const History h = expand_bins(b, {Placement::Uniform, 4});
  ASSERT_EQ(h.size(), 8u);
  EXPECT_EQ(bin_arrivals(h, 4), b);
  EXPECT_EQ(h, expand_bins(b, {Placement::Uniform, 4}));
}

TEST(Synth, PoissonDayCount) {
  const TraceDataset d = synth_trace({{"p", {1.0, 0.0, 1.0}}}, {1}, 3);
  EXPECT_NEAR(static_cast<double>(d.arrivals("p", 1).size()), 1440.0, 4.0 * std::sqrt(1440.0));
}

TEST(Synth, DeterministicAndBinAligned) {
  const auto apps = synth_population(5, 9);
  EXPECT_EQ(apps.size(), 5u);
  for (const auto& a : apps) EXPECT_TRUE(a.params.stationary()) << a.id;
  const TraceDataset a = synth_trace(apps, {7, 8, 9}, 9);
  const TraceDataset b = synth_trace(apps, {7, 8, 9}, 9);
  EXPECT_EQ(a.apps, b.apps);
  EXPECT_EQ(a.days, (std::vector<int>{7, 8, 9}));
}

TEST(Synth, BinningMovesArrivalsLessThanAMinute) {
  SimConfig cfg;
  cfg.seed = 2;
  cfg.stop = Horizon{1440.0};
  const History raw = simulate({0.2, 0.5, 1.0}, cfg);
  const MinuteBins bins = bin_arrivals(raw);
  const History back = expand_bins(bins);
  ASSERT_EQ(back.size(), raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_LT(std::abs(back[i] - raw[i]), 1.0);
  std::uint64_t total = 0;
  for (auto c : bins) total += c;
  EXPECT_EQ(total, raw.size());
}
