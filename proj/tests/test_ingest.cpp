#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "stylized/ingest.hpp"

using namespace stylized;
using namespace std::chrono;

namespace {

PriceSeries series_of(std::initializer_list<double> closes, std::initializer_list<double> volumes = {}) {
  PriceSeries s{"T", {}};
  sys_days day = sys_days{year{2020} / January / 1};
  auto v = volumes.begin();
  for (double c : closes) {
    const double vol = v != volumes.end() ? *v++ : 100.0;
    s.records.push_back({year_month_day{day}, c, vol});
    day += days{1};
  }
  return s;
}

PriceSeries parse(const std::string& text) {
  std::istringstream in(text);
  return parse_price_csv(in, "T");
}

}  // namespace

TEST(ParsePriceCsv, HeaderAndTwoRows) {
  const auto s = parse(
      "Date,Open,High,Low,Close,Adj Close,Volume\n"
      "2015-03-02,1,2,0.5,1.5,1.4,1000\n"
      "2015-03-03,1,2,0.5,1.6,1.5,1100\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s.records[0].close, 1.5);
  EXPECT_DOUBLE_EQ(s.records[1].volume, 1100.0);
  EXPECT_EQ(format_date(s.records[1].date), "2015-03-03");
}

TEST(ParsePriceCsv, NullRowIsKeptForCleaning) {
  const auto s = parse(
      "Date,Open,High,Low,Close,Adj Close,Volume\n"
      "2015-03-02,null,null,null,null,null,null\n"
      "2015-03-03,1,2,0.5,1.6,1.5,1100\n"
      "2015-03-04,1,2,0.5,1.7,1.5,1200\n");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_TRUE(std::isnan(s.records[0].close));
  const auto c = clean(s);
  EXPECT_EQ(c.series.size(), 2u);
  EXPECT_EQ(c.dropped, 1u);
}

TEST(ParsePriceCsv, MissingCloseAndAdjCloseIsFormatError) {
  try {
    parse("Date,Open,High,Low,Volume\n2015-03-02,1,2,0.5,10\n");
    FAIL() << "expected a format error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Format);
    EXPECT_NE(std::string(e.what()).find("Close"), std::string::npos);
  }
}

TEST(ParsePriceCsv, MissingVolumeNamesColumn) {
  try {
    parse("Date,Close\n2015-03-02,1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Format);
    EXPECT_NE(std::string(e.what()).find("Volume"), std::string::npos);
  }
}

TEST(ParsePriceCsv, AdjCloseUsedOnlyWithoutClose) {
  const auto with_both = parse("Date,Close,Adj Close,Volume\n2015-03-02,10,9,1\n");
  EXPECT_DOUBLE_EQ(with_both.records[0].close, 10.0);
  const auto adj_only = parse("Date,Adj Close,Volume\n2015-03-02,9,1\n");
  EXPECT_DOUBLE_EQ(adj_only.records[0].close, 9.0);
}

TEST(ParsePriceCsv, BadRowCarriesLineNumber) {
  try {
    parse("Date,Close,Volume\n2015-03-02,10,1\n2015-03-03,abc,1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Row);
    ASSERT_TRUE(e.row().has_value());
    EXPECT_EQ(*e.row(), 3u);
  }
  try {
    parse("Date,Close,Volume\n2015-13-02,10,1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Row);
    EXPECT_EQ(*e.row(), 2u);
  }
}

TEST(Clean, DropsNonPositiveClose) {
  const auto c = clean(series_of({100, -1, 101}));
  ASSERT_EQ(c.series.size(), 2u);
  EXPECT_DOUBLE_EQ(c.series.records[0].close, 100.0);
  EXPECT_DOUBLE_EQ(c.series.records[1].close, 101.0);
  EXPECT_EQ(c.dropped, 1u);
}

TEST(Clean, DuplicateDateKeepsFirst) {
  auto s = series_of({100, 105, 110});
  s.records[1].date = s.records[0].date;
  const auto c = clean(s);
  ASSERT_EQ(c.series.size(), 2u);
  EXPECT_DOUBLE_EQ(c.series.records[0].close, 100.0);
  EXPECT_DOUBLE_EQ(c.series.records[1].close, 110.0);
}

TEST(Clean, SortsByDate) {
  auto s = series_of({100, 105, 110});
  std::swap(s.records[0], s.records[2]);
  const auto c = clean(s);
  EXPECT_DOUBLE_EQ(c.series.records[0].close, 100.0);
  EXPECT_DOUBLE_EQ(c.series.records[2].close, 110.0);
}

TEST(Clean, AllNullIsEmptySeries) {
  const auto s = parse("Date,Close,Volume\n2015-03-02,null,null\n2015-03-03,null,null\n");
  try {
    clean(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptySeries);
  }
}

TEST(Clean, Idempotent) {
  auto s = series_of({100, -1, 101, 0, 102, 103});
  s.records[4].date = s.records[2].date;
  const auto once = clean(s).series;
  const auto twice = clean(once);
  ASSERT_EQ(once.size(), twice.series.size());
  EXPECT_EQ(twice.dropped, 0u);
  for (std::size_t i = 0; i < once.size(); ++i) {
    EXPECT_EQ(once.records[i].date, twice.series.records[i].date);
    EXPECT_EQ(once.records[i].close, twice.series.records[i].close);
  }
}

TEST(LogReturns, SingleStep) {
  const auto r = log_returns(series_of({100, 110}), 1);
  ASSERT_EQ(r.values.size(), 1u);
  EXPECT_NEAR(r.values[0], 0.0953102, 1e-7);
}

TEST(LogReturns, ConstantPricesGiveZeros) {
  const auto r = log_returns(series_of({50, 50, 50}), 1);
  ASSERT_EQ(r.values.size(), 2u);
  EXPECT_EQ(r.values[0], 0.0);
  EXPECT_EQ(r.values[1], 0.0);
}

TEST(LogReturns, LengthSixHorizonFive) {
  const auto s = series_of({1, 2, 3, 4, 5, 6});
  EXPECT_EQ(log_returns(s, 5, true).values.size(), 1u);
  EXPECT_EQ(log_returns(s, 5, false).values.size(), 1u);
}

TEST(LogReturns, NonOverlappingLength) {
  std::vector<double> closes;
  PriceSeries s{"T", {}};
  sys_days day = sys_days{year{2020} / January / 1};
  for (int i = 0; i < 23; ++i) {
    s.records.push_back({year_month_day{day}, 100.0 + i, 1.0});
    day += days{1};
  }
  EXPECT_EQ(log_returns(s, 5, false).values.size(), 4u);  // floor(22/5)
  EXPECT_EQ(log_returns(s, 5, true).values.size(), 18u);
  EXPECT_NEAR(log_returns(s, 5, false).values[1], std::log(110.0 / 105.0), 1e-15);
}

TEST(LogReturns, TooShortIsInsufficientData) {
  try {
    log_returns(series_of({1, 2}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(LogReturns, OverlappingSumsTelescope) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z(0.0, 0.02);
  PriceSeries s{"T", {}};
  sys_days day = sys_days{year{2020} / January / 1};
  double p = 100.0;
  for (int i = 0; i < 300; ++i) {
    s.records.push_back({year_month_day{day}, p, 1.0});
    p *= std::exp(z(rng));
    day += days{1};
  }
  const auto r1 = log_returns(s, 1).values;
  for (int h : {5, 20, 60}) {
    const auto rh = log_returns(s, h).values;
    for (std::size_t t = 0; t < rh.size(); ++t) {
      double sum = 0.0;
      for (int k = 0; k < h; ++k) sum += r1[t + static_cast<std::size_t>(k)];
      EXPECT_NEAR(sum, rh[t], 1e-12);
    }
    for (double v : rh) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(VolumeValues, KeepsZeros) {
  const auto v = volume_values(series_of({1, 2, 3}, {10, 0, 20}));
  EXPECT_EQ(v, (std::vector<double>{10, 0, 20}));
}

TEST(VolumeValues, EmptyAndSingle) {
  EXPECT_THROW(volume_values(PriceSeries{}), Error);
  EXPECT_EQ(volume_values(series_of({5})).size(), 1u);
}

TEST(Manifest, ResolvesRelativePathsAndRejectsDuplicates) {
  const auto dir = std::filesystem::temp_directory_path() / "stylized_manifest_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "m.json") << R"({"markets":[{"name":"A","stocks":[{"ticker":"X","path":"x.csv"}]}]})";
  }
  const auto m = load_manifest(dir / "m.json");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].entries[0].path, dir / "x.csv");
  {
    std::ofstream(dir / "d.json")
        << R"({"markets":[{"name":"A","stocks":[{"ticker":"X","path":"x.csv"},{"ticker":"X","path":"y.csv"}]}]})";
  }
  try {
    load_manifest(dir / "d.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Input);
  }
  EXPECT_THROW(load_manifest(dir / "missing.json"), Error);
}
