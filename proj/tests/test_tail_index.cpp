#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "stylized/tail_index.hpp"
#include "support/generators.hpp"

using namespace stylized;

namespace {

// Hill on descending order statistics, written out directly.
double hill_oracle(std::vector<double> x, std::size_t k) {
  std::sort(x.begin(), x.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(x[i]) - std::log(x[k]);
  return s / static_cast<double>(k);
}

template <class Pred>
int count_trials(int trials, std::uint64_t base, Pred&& pred) {
  int hits = 0;
  for (int s = 0; s < trials; ++s) {
    if (pred(base + static_cast<std::uint64_t>(s))) ++hits;
  }
  return hits;
}

}  // namespace

TEST(Hill, ParetoQuantileGrid) {
  const std::size_t n = 10'000;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    x[i] = std::pow(1.0 - u, -0.5);
  }
  const double xi = hill_estimate(x, 500);
  EXPECT_GE(xi, 0.45);
  EXPECT_LE(xi, 0.55);
  EXPECT_NEAR(xi, hill_oracle(x, 500), 1e-12);
}

TEST(Hill, EqualTopValuesGiveZero) {
  std::vector<double> x;
  for (int i = 1; i <= 200; ++i) x.push_back(i);
  for (int i = 0; i < 21; ++i) x.push_back(1000.0);
  EXPECT_DOUBLE_EQ(hill_estimate(x, 20), 0.0);
}

TEST(Hill, EqualTopValuesNotHeavy) {
  std::vector<double> x(200, 5.0);
  for (int i = 1; i <= 20; ++i) x[i] = 1.0 + 0.01 * i;
  const auto r = adaptive_tail_index(x);
  EXPECT_FALSE(r.heavy_tailed);
}

TEST(Hill, ScaleInvariance) {
  auto x = testgen::pareto(3000, 2.5, 8);
  const double a = hill_estimate(x, 150);
  for (double& v : x) v *= 37.5;
  EXPECT_NEAR(hill_estimate(x, 150), a, 1e-12);
}

TEST(Hill, TooFewPositives) {
  std::vector<double> x(30, 0.0);
  x[0] = 1.0;
  x[1] = 2.0;
  try {
    hill_estimate(x, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientTail);
  }
}

TEST(Hill, NonNegative) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto x = testgen::abs_values(testgen::gaussian(500, s));
    EXPECT_GE(hill_estimate(x, 50), 0.0);
  }
}

TEST(AdaptiveTailIndex, ExponentialNotHeavy) {
  const int hits = count_trials(50, 700, [](std::uint64_t s) {
    return !adaptive_tail_index(testgen::exponential(10'000, s)).heavy_tailed;
  });
  EXPECT_GE(hits, 45);
}

TEST(AdaptiveTailIndex, ExponentialAlphaLarge) {
  const auto r = adaptive_tail_index(testgen::exponential(10'000, 700));
  EXPECT_GE(r.alpha, 8.0);
  EXPECT_FALSE(r.heavy_tailed);
}

TEST(AdaptiveTailIndex, ParetoThree) {
  const int hits = count_trials(100, 100, [](std::uint64_t s) {
    const auto r = adaptive_tail_index(testgen::pareto(10'000, 3.0, s));
    return r.alpha >= 2.5 && r.alpha <= 3.5;
  });
  EXPECT_GE(hits, 90);
}

TEST(AdaptiveTailIndex, StudentThreeAbsolute) {
  const int hits = count_trials(100, 200, [](std::uint64_t s) {
    const auto r = adaptive_tail_index(testgen::abs_values(testgen::student_t(10'000, 3.0, s)));
    return r.alpha >= 2.2 && r.alpha <= 4.0;
  });
  EXPECT_GE(hits, 80);
}

TEST(AdaptiveTailIndex, GaussianAbsoluteNotHeavy) {
  const int hits = count_trials(100, 300, [](std::uint64_t s) {
    return !adaptive_tail_index(testgen::abs_values(testgen::gaussian(10'000, s))).heavy_tailed;
  });
  EXPECT_GE(hits, 80);
}

TEST(AdaptiveTailIndex, ResultInvariants) {
  const auto r = adaptive_tail_index(testgen::pareto(5000, 2.0, 4));
  EXPECT_TRUE(r.heavy_tailed);
  EXPECT_GT(r.xi, 0.0);
  EXPECT_NEAR(r.alpha * r.xi, 1.0, 1e-12);
  EXPECT_GE(r.k, 2u);
  EXPECT_LT(r.k, r.n);
}

TEST(AdaptiveTailIndex, TooShort) {
  try {
    adaptive_tail_index(testgen::pareto(99, 2.0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(ReturnTailIndex, ScaledStudentFour) {
  const int hits = count_trials(100, 400, [](std::uint64_t s) {
    auto r = testgen::student_t(10'000, 4.0, s);
    for (double& v : r) v = 0.01 * v / std::sqrt(2.0) + 0.0003;
    const auto t = return_tail_index(r);
    return t.alpha >= 2.0 && t.alpha <= 6.0;
  });
  EXPECT_GE(hits, 80);
}

TEST(ReturnTailIndex, ConstantReturns) {
  const std::vector<double> r(500, 0.001);
  try {
    return_tail_index(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientTail);
  }
}

TEST(ReturnTailIndex, ScaleInvariance) {
  auto r = testgen::student_t(4000, 4.0, 55);
  const auto a = return_tail_index(r);
  for (double& v : r) v *= 0.02;
  const auto b = return_tail_index(r);
  EXPECT_EQ(a.k, b.k);
  EXPECT_NEAR(a.xi, b.xi, 1e-12);
}

TEST(ReturnTailIndex, SidesDiffer) {
  auto r = testgen::student_t(5000, 3.0, 6);
  for (double& v : r) {
    if (v < 0) v *= 0.2;
  }
  const auto up = return_tail_index(r, TailSide::Upper);
  const auto lo = return_tail_index(r, TailSide::Lower);
  EXPECT_GT(up.xi, 0.0);
  EXPECT_GT(lo.xi, 0.0);
  EXPECT_NE(up.k + up.xi, lo.k + lo.xi);
}
