#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stylized/long_memory.hpp"
#include "support/generators.hpp"

using namespace stylized;

namespace {

double rs_oracle(const std::vector<double>& x, std::size_t l) {
  const std::size_t m = x.size() / l;
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t b = 0; b < m; ++b) {
    const auto first = x.begin() + static_cast<std::ptrdiff_t>(b * l);
    const std::vector<double> blk(first, first + static_cast<std::ptrdiff_t>(l));
    const double mu = std::accumulate(blk.begin(), blk.end(), 0.0) / static_cast<double>(l);
    std::vector<double> z(l + 1, 0.0);
    double ss = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
      z[i + 1] = z[i] + blk[i] - mu;
      ss += (blk[i] - mu) * (blk[i] - mu);
    }
    const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
    const double s = std::sqrt(ss / static_cast<double>(l));
    if (s == 0.0) continue;
    total += (*hi - *lo) / s;
    ++used;
  }
  return total / static_cast<double>(used);
}

ErrorKind kind_of(const std::vector<double>& x) {
  try {
    hurst(x);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Input;
}

}  // namespace

TEST(RescaledRange, AlternatingBlockIsOne) {
  std::vector<double> x;
  for (int i = 0; i < 16; ++i) x.push_back(i % 2 == 0 ? 1.0 : -1.0);
  EXPECT_DOUBLE_EQ(rs_statistic(x, 8), 1.0);
}

TEST(RescaledRange, MatchesOracle) {
  const auto x = testgen::gaussian(1000, 3);
  for (std::size_t l : {8u, 16u, 50u, 125u, 500u}) {
    EXPECT_NEAR(rs_statistic(x, l), rs_oracle(x, l), 1e-12) << l;
  }
}

TEST(RescaledRange, ConstantSeriesIsDegenerate) {
  const std::vector<double> x(256, 4.2);
  try {
    rs_statistic(x, 16);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
  }
  EXPECT_EQ(kind_of(x), ErrorKind::Degenerate);
}

TEST(RescaledRange, ShiftInvariance) {
  auto x = testgen::gaussian(512, 9);
  const double a = rs_statistic(x, 32);
  for (double& v : x) v += 1000.0;
  EXPECT_NEAR(rs_statistic(x, 32), a, 1e-9);
}

TEST(RescaledRange, FlatBlocksSkipped) {
  auto x = testgen::gaussian(64, 2);
  std::fill(x.begin(), x.begin() + 16, 1.0);
  const auto r = rescaled_range(x, 16);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(r.blocks, 3u);
  EXPECT_NEAR(r.mean_rs, rs_oracle(x, 16), 1e-12);
}

TEST(RescaledRange, Preconditions) {
  const auto x = testgen::gaussian(20, 1);
  EXPECT_THROW(rs_statistic(x, 7), Error);
  EXPECT_THROW(rs_statistic(x, 11), Error);
}

TEST(Hurst, GridIsDyadic) {
  const auto r = hurst(testgen::gaussian(1000, 1));
  const std::vector<std::size_t> expect{8, 16, 32, 64, 128, 256};
  EXPECT_EQ(r.grid, expect);
  ASSERT_EQ(r.rs_values.size(), expect.size());
  for (double v : r.rs_values) EXPECT_GT(v, 0.0);
}

TEST(Hurst, TooShort) {
  EXPECT_EQ(kind_of(testgen::gaussian(63, 1)), ErrorKind::InsufficientData);
}

TEST(Hurst, GaussianNoise) {
  int hits = 0;
  for (int s = 0; s < 200; ++s) {
    const double h = hurst(testgen::gaussian(4096, 10'000 + s)).H;
    if (h >= 0.45 && h <= 0.62) ++hits;
  }
  EXPECT_GE(hits, 180);
}

TEST(Hurst, LinearRamp) {
  std::vector<double> x(4096);
  std::iota(x.begin(), x.end(), 0.0);
  EXPECT_GT(hurst(x).H, 0.9);
}

TEST(Hurst, FractionalGaussianNoise) {
  int hits = 0;
  for (int s = 0; s < 100; ++s) {
    const double h = hurst(testgen::fgn(4096, 0.75, 20'000 + s)).H;
    if (h >= 0.65 && h <= 0.85) ++hits;
  }
  EXPECT_GE(hits, 90);
}

TEST(Hurst, AffineInvariance) {
  auto x = testgen::student_t(3000, 4.0, 5);
  const auto a = hurst(x);
  for (double& v : x) v = 25.0 * v - 3.0;
  const auto b = hurst(x);
  EXPECT_NEAR(a.H, b.H, 1e-9);
  EXPECT_NEAR(a.raw_slope, b.raw_slope, 1e-9);
}

TEST(Hurst, Reproducible) {
  const auto x = testgen::gaussian(2048, 77);
  const auto a = hurst(x), b = hurst(x);
  EXPECT_EQ(a.raw_slope, b.raw_slope);
  EXPECT_EQ(a.rs_values, b.rs_values);
}

TEST(Hurst, ClampedWithRawSlopeKept) {
  const auto r = hurst(testgen::gaussian(4096, 1));
  EXPECT_GE(r.H, 0.0);
  EXPECT_LE(r.H, 1.0);
  EXPECT_DOUBLE_EQ(r.raw_slope, r.fit.slope);
}
