#pragma once

// Kolmogorov-Smirnov, Shapiro-Wilk and Jarque-Bera tests of normality.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "stylized/distributions.hpp"
#include "stylized/error.hpp"
#include "stylized/stats.hpp"

namespace stylized {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  /// Degrees of freedom where a chi-square/t reference is used, else n.
  double df = 0.0;
  std::optional<double> level;

  [[nodiscard]] bool rejected(double alpha) const noexcept { return p_value < alpha; }
  [[nodiscard]] std::optional<bool> rejected() const noexcept {
    if (!level) return std::nullopt;
    return p_value < *level;
  }
};

/// KS against N(mean, sd) with parameters estimated from the sample; no
/// Lilliefors correction, so the test is conservative.
inline TestResult ks_normality(std::span<const double> sample) {
  const auto n = sample.size();
  if (n < 8) fail(ErrorKind::InsufficientData, "ks_normality requires n >= 8");
  const double mu = mean(sample);
  const double sd = std::sqrt(variance(sample));
  if (!(sd > 0.0)) fail(ErrorKind::Degenerate, "ks_normality: zero variance");

  std::vector<double> z(sample.begin(), sample.end());
  std::sort(z.begin(), z.end());
  const auto dn = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = dist::normal_cdf((z[i] - mu) / sd);
    d = std::max({d, (static_cast<double>(i) + 1.0) / dn - f, f - static_cast<double>(i) / dn});
  }
  return {d, dist::kolmogorov_sf(std::sqrt(dn) * d), dn, std::nullopt};
}

namespace detail {

inline double poly(std::span<const double> c, double x) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

}  // namespace detail

/// Shapiro-Wilk W with Royston's (1995) coefficient approximation and
/// normalising transformation (algorithm AS R94). Supports 3 <= n <= 5000.
inline TestResult shapiro_wilk(std::span<const double> sample) {
  const auto n = sample.size();
  if (n < 3 || n > 5000) fail(ErrorKind::UnsupportedSize, "shapiro_wilk supports 3 <= n <= 5000");

  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0.0)) fail(ErrorKind::Degenerate, "shapiro_wilk: zero range");

  static constexpr std::array<double, 6> c1{0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static constexpr std::array<double, 6> c2{0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr std::array<double, 4> c3{0.5440, -0.39978, 0.025054, -6.714e-4};
  static constexpr std::array<double, 4> c4{1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr std::array<double, 4> c5{-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr std::array<double, 3> c6{-0.4803, -0.082676, 0.0030302};
  static constexpr std::array<double, 2> g{-2.273, 0.459};

  const auto an = static_cast<double>(n);
  const std::size_t half = n / 2;
  // a[i] for the lower half, positive; full coefficients are antisymmetric.
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = dist::normal_quantile((static_cast<double>(i) + 1.0 - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = detail::poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first = 1;
    double fac = 0.0;
    if (n > 5) {
      first = 2;
      const double a2 = -m[1] / ssumm2 + detail::poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first; i < half; ++i) a[i] = -m[i] / fac;
  }

  // W as the squared correlation between coefficients and the scaled data;
  // 1 - W is formed directly to keep precision when W is close to 1.
  std::vector<double> coef(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    coef[i] = -a[i];
    coef[n - 1 - i] = a[i];
  }
  double sa = 0.0, sx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += coef[i];
    sx += x[i] / range;
  }
  sa /= an;
  sx /= an;
  double ssa = 0.0, ssx = 0.0, sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double asa = coef[i] - sa;
    const double xsx = x[i] / range - sx;
    ssa += asa * asa;
    ssx += xsx * xsx;
    sax += asa * xsx;
  }
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
  const double w = 1.0 - w1;

  double pw = 1.0;
  if (n == 3) {
    constexpr double pi6 = 6.0 / std::numbers::pi;
    constexpr double stqr = std::numbers::pi / 3.0;
    pw = std::max(0.0, pi6 * (std::asin(std::sqrt(w)) - stqr));
  } else {
    double y = std::log(w1);
    const double xx = std::log(an);
    double m = 0.0, s = 1.0;
    bool decided = false;
    if (n <= 11) {
      const double gamma = detail::poly(g, an);
      if (y >= gamma) {
        pw = 1e-99;
        decided = true;
      } else {
        y = -std::log(gamma - y);
        m = detail::poly(c3, an);
        s = std::exp(detail::poly(c4, an));
      }
    } else {
      m = detail::poly(c5, xx);
      s = std::exp(detail::poly(c6, xx));
    }
    if (!decided) pw = dist::normal_sf((y - m) / s);
  }
  return {w, std::clamp(pw, 0.0, 1.0), an, std::nullopt};
}

/// JB = n/6 (skew^2 + (K - 3)^2 / 4), chi-square(2) reference.
inline double jarque_bera_statistic(std::size_t n, double skewness, double kurtosis) {
  const double excess = kurtosis - 3.0;
  return static_cast<double>(n) / 6.0 * (skewness * skewness + excess * excess / 4.0);
}

inline TestResult jarque_bera(std::span<const double> sample) {
  if (sample.size() < 8) fail(ErrorKind::InsufficientData, "jarque_bera requires n >= 8");
  const auto m = moments(sample);
  const double jb = jarque_bera_statistic(m.n, m.skewness, m.kurtosis);
  return {jb, dist::chi_square_sf(jb, 2.0), 2.0, std::nullopt};
}

}  // namespace stylized
