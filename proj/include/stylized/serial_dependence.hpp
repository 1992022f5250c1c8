#pragma once

// Portmanteau tests, single-lag autocorrelation tests, power-law decay of the
// absolute-return ACF, and coarse/fine volatility time-scale asymmetry.

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stylized/distributions.hpp"
#include "stylized/error.hpp"
#include "stylized/normality.hpp"
#include "stylized/stats.hpp"

namespace stylized {

enum class PortmanteauVariant { BoxPierce, LjungBox };

struct PortmanteauResult {
  PortmanteauVariant variant = PortmanteauVariant::LjungBox;
  std::size_t m = 0;
  double Q = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// Q statistic from precomputed autocorrelations r_1..r_m (acf[0] is ignored).
inline PortmanteauResult portmanteau_from_acf(PortmanteauVariant variant, std::span<const double> acf_values,
                                              std::size_t n, std::size_t m) {
  if (m < 1 || m >= acf_values.size()) fail(ErrorKind::InvalidArgument, "portmanteau: lag out of range");
  if (n <= m + 2) fail(ErrorKind::InsufficientData, "portmanteau: need n > m + 2");
  const auto dn = static_cast<double>(n);
  double q = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double r2 = acf_values[i] * acf_values[i];
    q += variant == PortmanteauVariant::BoxPierce ? r2 : r2 / (dn - static_cast<double>(i));
  }
  q *= variant == PortmanteauVariant::BoxPierce ? dn : dn * (dn + 2.0);
  return {variant, m, q, dist::chi_square_sf(q, static_cast<double>(m)), n};
}

inline PortmanteauResult box_pierce(std::span<const double> series, std::size_t m) {
  if (series.size() <= m + 2) fail(ErrorKind::InsufficientData, "box_pierce: need n > m + 2");
  const auto r = acf(series, m);
  return portmanteau_from_acf(PortmanteauVariant::BoxPierce, r.values, series.size(), m);
}

inline PortmanteauResult ljung_box(std::span<const double> series, std::size_t m) {
  if (series.size() <= m + 2) fail(ErrorKind::InsufficientData, "ljung_box: need n > m + 2");
  const auto r = acf(series, m);
  return portmanteau_from_acf(PortmanteauVariant::LjungBox, r.values, series.size(), m);
}

struct SingleLagTests {
  std::size_t lag = 1;
  double r = 0.0;
  TestResult normal;    ///< r sqrt(n) / (1 - r^2), asymptotic N(0, 1)
  TestResult student;   ///< r sqrt(n - 2) / sqrt(1 - r^2), t(n - 2)
};

/// Both statistics from a lag autocorrelation r of a series of length n.
inline SingleLagTests single_lag_tests_from_r(double r, std::size_t n, std::size_t lag) {
  if (!(std::fabs(r) < 1.0)) fail(ErrorKind::Degenerate, "single_lag_tests: |r| = 1");
  const auto dn = static_cast<double>(n);
  SingleLagTests out;
  out.lag = lag;
  out.r = r;
  const double z = r * std::sqrt(dn) / (1.0 - r * r);
  const double t = r * std::sqrt(dn - 2.0) / std::sqrt(1.0 - r * r);
  out.normal = {z, dist::normal_two_sided(z), dn, std::nullopt};
  out.student = {t, dist::student_t_two_sided(t, dn - 2.0), dn - 2.0, std::nullopt};
  return out;
}

inline SingleLagTests single_lag_tests(std::span<const double> series, std::size_t lag) {
  if (series.size() <= lag + 3) fail(ErrorKind::InsufficientData, "single_lag_tests: need n > lag + 3");
  const auto r = acf(series, lag);
  return single_lag_tests_from_r(r[lag], series.size(), lag);
}

struct AcfDecayFit {
  double beta = 0.0;  ///< -slope of log ac(l) on log l
  std::vector<std::size_t> lags_used;
  std::vector<std::size_t> excluded_lags;
  LineFit fit;
};

/// Fits ac(l) = k l^(-beta) on lags with positive ACF. `acf_values[l]` holds
/// ac(l); index 0 is ignored.
inline AcfDecayFit power_law_fit_acf(std::span<const double> acf_values) {
  AcfDecayFit out;
  std::vector<double> x, y;
  for (std::size_t l = 1; l < acf_values.size(); ++l) {
    if (acf_values[l] > 0.0) {
      out.lags_used.push_back(l);
      x.push_back(std::log(static_cast<double>(l)));
      y.push_back(std::log(acf_values[l]));
    } else {
      out.excluded_lags.push_back(l);
    }
  }
  if (out.lags_used.size() < 5) {
    fail(ErrorKind::InsufficientData, "acf_power_law_fit: fewer than 5 lags with positive ACF");
  }
  out.fit = ols_fit(x, y);
  out.beta = -out.fit.slope;
  return out;
}

/// Power-law decay of the ACF of |returns| up to `max_lag`.
inline AcfDecayFit acf_power_law_fit(std::span<const double> returns, std::size_t max_lag) {
  if (max_lag < 5 || returns.size() <= max_lag) {
    fail(ErrorKind::InvalidArgument, "acf_power_law_fit: need n > L >= 5");
  }
  std::vector<double> abs_r(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) abs_r[i] = std::fabs(returns[i]);
  const auto r = acf(abs_r, max_lag);
  return power_law_fit_acf(r.values);
}

struct AsymmetryResult {
  std::size_t window = 5;
  std::size_t windows_used = 0;
  int max_lag = 10;
  std::map<int, double> C;     ///< lag h -> corr(fine_{t+h}, coarse_t)
  std::vector<double> diffs;   ///< diffs[l-1] = C_l - C_{-l}
  std::vector<double> bands;   ///< 1.96 sqrt(2 / N_l)
  std::vector<bool> significant_positive;
  bool any_significant = false;
};

/// Lagged correlations between a fine volatility series X and a coarse one Y,
/// C_h = corr(X_{t+h}, Y_t), with the C_l - C_{-l} differences and their
/// approximate 95% bands.
inline AsymmetryResult lagged_asymmetry(std::span<const double> fine, std::span<const double> coarse,
                                        int max_lag = 10) {
  if (fine.size() != coarse.size()) fail(ErrorKind::InvalidArgument, "asymmetry: length mismatch");
  AsymmetryResult out;
  out.windows_used = fine.size();
  out.max_lag = max_lag;
  for (int h = -max_lag; h <= max_lag; ++h) out.C[h] = lagged_cross_corr(fine, coarse, h);
  for (int l = 1; l <= max_lag; ++l) {
    const double diff = out.C[l] - out.C[-l];
    const double n_pairs = static_cast<double>(fine.size()) - static_cast<double>(l);
    const double band = 1.96 * std::sqrt(2.0 / n_pairs);
    out.diffs.push_back(diff);
    out.bands.push_back(band);
    out.significant_positive.push_back(diff > band);
    out.any_significant = out.any_significant || diff > band;
  }
  return out;
}

/// Per non-overlapping window j (anchored at the first return, trailing
/// partial window dropped): coarse_j = (sum of returns)^2, fine_j = variance
/// of the returns (1/w weighting).
inline std::pair<std::vector<double>, std::vector<double>> fine_coarse_measures(std::span<const double> daily,
                                                                                std::size_t window) {
  const std::size_t count = daily.size() / window;
  std::vector<double> fine(count), coarse(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto w = daily.subspan(j * window, window);
    double s = 0.0;
    for (double v : w) s += v;
    coarse[j] = s * s;
    const double mu = s / static_cast<double>(window);
    double ss = 0.0;
    for (double v : w) ss += (v - mu) * (v - mu);
    fine[j] = ss / static_cast<double>(window);
  }
  return {std::move(fine), std::move(coarse)};
}

inline AsymmetryResult asymmetry_timescales(std::span<const double> daily, std::size_t window) {
  if (window < 2) fail(ErrorKind::InvalidArgument, "asymmetry_timescales: window must be >= 2");
  if (daily.size() / window < 40) {
    fail(ErrorKind::InsufficientData, "asymmetry_timescales: fewer than 40 complete windows");
  }
  auto [fine, coarse] = fine_coarse_measures(daily, window);
  auto out = lagged_asymmetry(fine, coarse);
  out.window = window;
  return out;
}

}  // namespace stylized
