#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "stylized/distributions.hpp"
#include "stylized/stats.hpp"
#include "support/generators.hpp"

using namespace stylized;

TEST(Moments, SymmetricThreePoints) {
  const std::vector<double> x{-1, 0, 1};
  const auto m = moments(x);
  EXPECT_DOUBLE_EQ(m.mean, 0.0);
  EXPECT_DOUBLE_EQ(m.skewness, 0.0);
  EXPECT_NEAR(m.variance, 2.0 / 3.0, 1e-15);
  EXPECT_TRUE(m.small_sample);
}

TEST(Moments, ZeroVarianceIsError) {
  const std::vector<double> x{0, 0, 0};
  try {
    moments(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
  }
}

TEST(Moments, ExponentialSkewnessAndKurtosis) {
  const auto x = testgen::exponential(1'000'000, 11);
  const auto m = moments(x);
  EXPECT_GE(m.skewness, 1.9);
  EXPECT_LE(m.skewness, 2.1);
  EXPECT_GE(m.kurtosis, 8.5);
  EXPECT_LE(m.kurtosis, 9.5);
}

TEST(Moments, HandComputedAgainstDirectFormula) {
  const std::vector<double> x{1, 2, 2, 3, 7};
  const double mu = 3.0;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    m2 += std::pow(v - mu, 2) / 5;
    m3 += std::pow(v - mu, 3) / 5;
    m4 += std::pow(v - mu, 4) / 5;
  }
  const auto m = moments(x);
  EXPECT_NEAR(m.variance, m2, 1e-14);
  EXPECT_NEAR(m.skewness, m3 / std::pow(m2, 1.5), 1e-14);
  EXPECT_NEAR(m.kurtosis, m4 / (m2 * m2), 1e-14);
  EXPECT_GE(m.kurtosis, 1.0);
}

TEST(Moments, PermutationInvariant) {
  auto x = testgen::gaussian(500, 3);
  const auto a = moments(x);
  std::mt19937_64 rng(5);
  std::shuffle(x.begin(), x.end(), rng);
  const auto b = moments(x);
  EXPECT_NEAR(a.mean, b.mean, 1e-15);
  EXPECT_NEAR(a.variance, b.variance, 1e-14);
  EXPECT_NEAR(a.skewness, b.skewness, 1e-12);
  EXPECT_NEAR(a.kurtosis, b.kurtosis, 1e-12);
}

TEST(PearsonCorr, IdentityAndReflection) {
  const auto x = testgen::gaussian(100, 1);
  std::vector<double> neg(x.size());
  std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
  EXPECT_NEAR(pearson_corr(x, x), 1.0, 1e-15);
  EXPECT_NEAR(pearson_corr(x, neg), -1.0, 1e-15);
}

TEST(PearsonCorr, HandEvaluation) {
  const std::vector<double> x{1, 2, 3}, y{2, 4, 6.5};
  // Sxy = 4.5, Sxx = 2, Syy = 10.1667 -> 4.5 / sqrt(20.3333)
  EXPECT_NEAR(pearson_corr(x, y), 4.5 / std::sqrt(2.0 * (61.0 / 6.0)), 1e-14);
  EXPECT_NEAR(pearson_corr(x, y), 0.99795, 5e-6);
}

TEST(PearsonCorr, SymmetricAndAffineInvariant) {
  const auto x = testgen::gaussian(200, 2);
  auto y = testgen::gaussian(200, 3);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.5 * x[i];
  std::vector<double> xa(x.size()), ya(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xa[i] = 3.0 * x[i] + 7.0;
    ya[i] = 0.2 * y[i] - 1.0;
  }
  const double r = pearson_corr(x, y);
  EXPECT_NEAR(r, pearson_corr(y, x), 1e-12);
  EXPECT_NEAR(r, pearson_corr(xa, ya), 1e-12);
}

TEST(PearsonCorr, ZeroVarianceIsError) {
  const std::vector<double> x{1, 1, 1}, y{1, 2, 3};
  EXPECT_THROW(pearson_corr(x, y), Error);
}

TEST(Acf, AlternatingSequence) {
  std::vector<double> x(100);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 == 0 ? 1.0 : -1.0;
  const auto r = acf(x, 1);
  EXPECT_EQ(r[0], 1.0);
  EXPECT_LE(r[1], -0.97);
  // Closed form for the global-mean estimator: -(n-1)/n.
  EXPECT_NEAR(r[1], -0.99, 1e-12);
}

TEST(Acf, ConstantIsDegenerate) {
  const std::vector<double> x(50, 3.0);
  try {
    acf(x, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
  }
}

TEST(Acf, InvalidLag) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_THROW(acf(x, 3), Error);
}

TEST(Acf, IidGaussianSmallLagOne) {
  const auto x = testgen::gaussian(100'000, 9);
  EXPECT_LT(std::fabs(acf(x, 1)[1]), 0.02);
}

TEST(Acf, BoundedAndMatchesDirectFormula) {
  const auto x = testgen::student_t(300, 3.0, 4);
  const auto r = acf(x, 20);
  const double mu = mean(x);
  double g0 = 0;
  for (double v : x) g0 += (v - mu) * (v - mu);
  for (std::size_t l = 1; l <= 20; ++l) {
    double g = 0;
    for (std::size_t t = 0; t + l < x.size(); ++t) g += (x[t] - mu) * (x[t + l] - mu);
    EXPECT_NEAR(r[l], g / g0, 1e-12);
    EXPECT_LE(std::fabs(r[l]), 1.0);
  }
}

TEST(LaggedCrossCorr, LagZeroIsPearson) {
  const auto x = testgen::gaussian(100, 1);
  const auto y = testgen::gaussian(100, 2);
  EXPECT_EQ(lagged_cross_corr(x, y, 0), pearson_corr(x, y));
}

TEST(LaggedCrossCorr, ShiftedCopy) {
  const auto base = testgen::gaussian(102, 3);
  // x is y delayed by two steps, so x_{t+2} = y_t.
  std::vector<double> xs(100), ys(100);
  for (std::size_t t = 0; t < 100; ++t) {
    ys[t] = base[t];
    xs[t] = t >= 2 ? base[t - 2] : 0.0;
  }
  EXPECT_NEAR(lagged_cross_corr(xs, ys, 2), 1.0, 1e-12);
}

TEST(LaggedCrossCorr, IndependentNoise) {
  const auto x = testgen::gaussian(10'000, 5);
  const auto y = testgen::gaussian(10'000, 6);
  for (long h = -10; h <= 10; ++h) EXPECT_LT(std::fabs(lagged_cross_corr(x, y, h)), 0.05);
}

TEST(LaggedCrossCorr, TooLittleOverlap) {
  const std::vector<double> x{1, 2, 3, 4}, y{4, 1, 3, 2};
  try {
    lagged_cross_corr(x, y, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(OlsFit, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9};
  const auto f = ols_fit(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.rss, 0.0, 1e-24);
}

TEST(OlsFit, TwoPoints) {
  const std::vector<double> x{1, 3}, y{2, -2};
  const auto f = ols_fit(x, y);
  EXPECT_NEAR(f.slope, -2.0, 1e-15);
  EXPECT_NEAR(f.intercept, 4.0, 1e-15);
  EXPECT_NEAR(f.rss, 0.0, 1e-24);
}

TEST(OlsFit, SingularDesign) {
  const std::vector<double> x{2, 2, 2}, y{1, 2, 3};
  EXPECT_THROW(ols_fit(x, y), Error);
}

TEST(OlsFit, NoisySlope) {
  const auto noise = testgen::gaussian(10'000, 8);
  std::vector<double> x(10'000), y(10'000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(i) / 1000.0;
    y[i] = x[i] + noise[i];
  }
  const auto f = ols_fit(x, y);
  EXPECT_GE(f.slope, 0.97);
  EXPECT_LE(f.slope, 1.03);
}

TEST(Quantiles, MedianOfOneToFive) {
  const std::vector<double> x{5, 3, 1, 4, 2};
  EXPECT_DOUBLE_EQ(median(x), 3.0);
}

TEST(Quantiles, FiveNumberOneToHundred) {
  std::vector<double> x(100);
  std::iota(x.begin(), x.end(), 1.0);
  const auto f = five_number(x);
  EXPECT_DOUBLE_EQ(f.min, 1.0);
  EXPECT_DOUBLE_EQ(f.q1, 25.75);
  EXPECT_DOUBLE_EQ(f.median, 50.5);
  EXPECT_DOUBLE_EQ(f.q3, 75.25);
  EXPECT_DOUBLE_EQ(f.max, 100.0);
}

TEST(Quantiles, ProbabilityOutsideUnitIntervalIsError) {
  const std::vector<double> x{1, 2, 3};
  const double bad[] = {1.5};
  EXPECT_THROW(quantiles(x, bad), Error);
  EXPECT_THROW(five_number(x), Error);
}

TEST(QqPairs, NormalQuantileGridLiesOnIdentity) {
  const std::size_t n = 200;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = dist::normal_quantile((static_cast<double>(i) + 0.5) / n);
  std::reverse(grid.begin(), grid.end());
  for (const auto& p : qq_pairs(grid, false)) EXPECT_NEAR(p.theoretical, p.empirical, 1e-6);
}

TEST(QqPairs, StandardizedColumnHasZeroMeanUnitVariance) {
  const auto x = testgen::gaussian(300, 12, 5.0, 3.0);
  const auto q = qq_pairs(x);
  std::vector<double> e;
  for (const auto& p : q) e.push_back(p.empirical);
  EXPECT_NEAR(mean(e), 0.0, 1e-12);
  EXPECT_NEAR(variance(e), 1.0, 1e-12);
  EXPECT_TRUE(std::is_sorted(e.begin(), e.end()));
}

TEST(Kde, ModeNearMedian) {
  const auto x = testgen::gaussian(2000, 13, 2.0, 1.0);
  std::vector<double> pts;
  for (int i = 0; i <= 400; ++i) pts.push_back(-2.0 + 0.02 * i);
  const auto d = kde(x, pts);
  const auto best = std::max_element(d.begin(), d.end()) - d.begin();
  EXPECT_NEAR(pts[static_cast<std::size_t>(best)], median(x), 0.3);
  for (double v : d) EXPECT_GE(v, 0.0);
}

TEST(Kde, SymmetricSample) {
  std::vector<double> x;
  for (double v : testgen::gaussian(100, 14)) {
    x.push_back(v);
    x.push_back(-v);
  }
  const double mu = mean(x);
  for (double off : {0.1, 0.5, 1.3, 2.2}) {
    const double pts[] = {mu - off, mu + off};
    const auto d = kde(x, pts);
    EXPECT_NEAR(d[0], d[1], 1e-9);
  }
}

TEST(Kde, FarPointNegligible) {
  const auto x = testgen::gaussian(100, 15);
  const double pts[] = {1000.0};
  EXPECT_LT(kde(x, pts)[0], 1e-12);
}

TEST(Kde, SilvermanRuleAndDegenerate) {
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const double sd = std::sqrt(variance(x));
  const double iqr = (7.75 - 3.25) / 1.34;
  EXPECT_NEAR(silverman_bandwidth(x), 0.9 * std::min(sd, iqr) * std::pow(10.0, -0.2), 1e-14);
  const std::vector<double> c(5, 1.0);
  const double pts[] = {1.0};
  EXPECT_THROW(kde(c, pts), Error);
}
