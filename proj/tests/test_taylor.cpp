#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "stylized/simulate.hpp"
#include "stylized/taylor.hpp"
#include "support/generators.hpp"

using namespace stylized;

namespace {

const GarchParams kGarch{0.0, 0.1, 0.1, 0.8};

double brute_argmax(const std::vector<double>& r, double lo, double hi, std::size_t points) {
  double best_d = lo, best_g = -2.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double d = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double g = power_acf1(r, d);
    if (g > best_g) {
      best_g = g;
      best_d = d;
    }
  }
  return best_d;
}

std::vector<std::vector<double>> test_series() {
  std::vector<std::vector<double>> out;
  for (std::uint64_t s = 0; s < 6; ++s) out.push_back(simulate_garch11(kGarch, 2500, 50 + s));
  for (std::uint64_t s = 0; s < 3; ++s) out.push_back(testgen::garch_t(0.05, 0.08, 0.9, 4.0, 2500, 60 + s));
  out.push_back(simulate_garch11({0.0, 0.2, 0.3, 0.5}, 1500, 70));
  return out;
}

}  // namespace

TEST(PowerAcf, EqualMagnitudesAreDegenerate) {
  std::vector<double> r(100);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = i % 3 == 0 ? -0.02 : 0.02;
  try {
    power_acf1(r, 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
  }
  EXPECT_THROW(maximize_taylor_d(r), Error);
}

TEST(PowerAcf, SquareMatchesAcfOfSquares) {
  const auto r = simulate_garch11(kGarch, 1000, 3);
  std::vector<double> sq(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) sq[i] = r[i] * r[i];
  EXPECT_NEAR(power_acf1(r, 2.0), acf(sq, 1)[1], 1e-12);
}

TEST(PowerAcf, ScaleInvariance) {
  auto r = simulate_garch11(kGarch, 1000, 4);
  std::vector<double> vals;
  for (double d : {0.25, 1.0, 2.5}) vals.push_back(power_acf1(r, d));
  for (double& v : r) v *= 0.01;
  std::size_t i = 0;
  for (double d : {0.25, 1.0, 2.5}) EXPECT_NEAR(power_acf1(r, d), vals[i++], 1e-12);
}

TEST(PowerAcf, AbsoluteBeatsFourthPowerUnderGarch) {
  int wins = 0;
  for (int s = 0; s < 50; ++s) {
    const auto r = simulate_garch11(kGarch, 2500, 800 + s);
    if (power_acf1(r, 1.0) > power_acf1(r, 4.0)) ++wins;
  }
  EXPECT_GT(wins, 25);
}

TEST(TaylorOptimizer, QuadraticStub) {
  const auto res = maximize_objective([](double d) { return -(d - 1.3) * (d - 1.3); });
  EXPECT_NEAR(res.d_star, 1.3, 1e-6);
  EXPECT_NE(res.method, TaylorMethod::GridFallback);
}

TEST(TaylorOptimizer, MonotoneStubReturnsEndpoint) {
  const auto up = maximize_objective([](double d) { return d; });
  EXPECT_DOUBLE_EQ(up.d_star, 4.0);
  EXPECT_EQ(up.method, TaylorMethod::GridFallback);
  const auto down = maximize_objective([](double d) { return -d; });
  EXPECT_DOUBLE_EQ(down.d_star, 0.125);
  EXPECT_EQ(down.method, TaylorMethod::GridFallback);
}

TEST(TaylorOptimizer, MatchesFineGridArgmax) {
  const double spacing = (4.0 - 0.125) / 1023.0;
  for (const auto& r : test_series()) {
    const auto res = maximize_taylor_d(r);
    EXPECT_NEAR(res.d_star, brute_argmax(r, 0.125, 4.0, 1024), spacing);
    EXPECT_GE(res.d_star, 0.125);
    EXPECT_LE(res.d_star, 4.0);
    EXPECT_GE(res.acf_at_d_star, power_acf1(r, 0.125) - 1e-9);
    EXPECT_GE(res.acf_at_d_star, power_acf1(r, 4.0) - 1e-9);
    EXPECT_EQ(res.abs_exceeds_sq, power_acf1(r, 1.0) > power_acf1(r, 2.0));
  }
}

TEST(TaylorOptimizer, GarchDStarRange) {
  int hits = 0;
  for (int s = 0; s < 100; ++s) {
    const double d = maximize_taylor_d(simulate_garch11(kGarch, 2500, 1200 + s)).d_star;
    if (d >= 0.5 && d <= 2.0) ++hits;
  }
  EXPECT_GE(hits, 80);
}

TEST(TaylorOptimizer, StudentInnovationGarchDStarRange) {
  int hits = 0;
  for (int s = 0; s < 100; ++s) {
    const double d = maximize_taylor_d(testgen::garch_t(0.1, 0.1, 0.8, 4.0, 2500, 1200 + s)).d_star;
    if (d >= 0.5 && d <= 2.0) ++hits;
  }
  EXPECT_GE(hits, 80);
}

TEST(TaylorOptimizer, MostlyZeroReturnsUnreliable) {
  auto r = testgen::gaussian(200, 5);
  for (std::size_t i = 0; i < 120; ++i) r[i * 5 / 3] = 0.0;
  EXPECT_TRUE(maximize_taylor_d(r).unreliable);
  EXPECT_FALSE(maximize_taylor_d(testgen::gaussian(200, 5)).unreliable);
}

TEST(Kurtosis, NormalKurtosisGivesZero) {
  const double b = 1.0 + std::numbers::sqrt2;
  std::vector<double> x;
  for (int rep = 0; rep < 3; ++rep) {
    for (double v : {-b, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0, b}) x.push_back(v);
  }
  const auto k = kurtosis_test(x);
  EXPECT_NEAR(k.K, 3.0, 1e-12);
  EXPECT_NEAR(k.statistic, 0.0, 1e-10);
  EXPECT_NEAR(k.p_value, 0.5, 1e-10);
}

TEST(Kurtosis, HandEvaluation) {
  const auto k = kurtosis_test_from_k(4.2, 2400);
  EXPECT_NEAR(k.statistic, std::sqrt(2400.0) * 1.2 / std::sqrt(24.0), 1e-12);
  EXPECT_NEAR(k.statistic, 12.0, 1e-12);
  EXPECT_LT(k.p_value, 1e-15);
  EXPECT_GE(k.p_value, 0.0);
}

TEST(Kurtosis, SizeUnderGaussian) {
  int rejected = 0;
  for (int s = 0; s < 1000; ++s) {
    if (kurtosis_test(testgen::gaussian(2500, 70'000 + s)).p_value < 0.05) ++rejected;
  }
  EXPECT_GE(rejected, 20);
  EXPECT_LE(rejected, 90);
}

TEST(Kurtosis, ZeroVarianceIsDegenerate) {
  const std::vector<double> x(40, 0.5);
  try {
    kurtosis_test(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
  }
}
