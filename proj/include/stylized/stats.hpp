#pragma once

// Numerical primitives shared by every analysis: population moments,
// correlations, autocorrelation, least squares lines, quantiles and KDE.
// All central moments use 1/n weighting.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "stylized/distributions.hpp"
#include "stylized/error.hpp"

namespace stylized {

struct MomentSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  /// True when n < 4, where the kurtosis is not meaningful.
  bool small_sample = false;
};

struct AcfSequence {
  std::vector<double> values;  // values[l] = rho_l, values[0] == 1
  std::size_t n = 0;

  [[nodiscard]] std::size_t max_lag() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  [[nodiscard]] double operator[](std::size_t lag) const { return values.at(lag); }
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
  std::size_t n = 0;
};

inline double mean(std::span<const double> x) {
  if (x.empty()) fail(ErrorKind::InsufficientData, "mean of empty sample");
  // exact for constant samples, so their deviations vanish
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) return x.front();
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Population variance (1/n).
inline double variance(std::span<const double> x) {
  const double mu = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - mu) * (v - mu);
  return s / static_cast<double>(x.size());
}

inline MomentSummary moments(std::span<const double> sample) {
  const auto n = sample.size();
  if (n < 2) fail(ErrorKind::InsufficientData, "moments require n >= 2");
  const double mu = mean(sample);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : sample) {
    const double d = v - mu;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const auto dn = static_cast<double>(n);
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  if (!(m2 > 0.0)) fail(ErrorKind::Degenerate, "zero variance: skewness and kurtosis undefined");
  MomentSummary out;
  out.n = n;
  out.mean = mu;
  out.variance = m2;
  out.skewness = m3 / std::pow(m2, 1.5);
  out.kurtosis = m4 / (m2 * m2);
  out.small_sample = n < 4;
  return out;
}

inline double pearson_corr(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorKind::InvalidArgument, "pearson_corr: length mismatch");
  if (x.size() < 2) fail(ErrorKind::InsufficientData, "pearson_corr: need n >= 2");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) fail(ErrorKind::Degenerate, "undefined correlation: zero variance input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Sample ACF using the global mean and 1/n normalisation for every lag.
inline AcfSequence acf(std::span<const double> sample, std::size_t max_lag) {
  const auto n = sample.size();
  if (max_lag < 1 || max_lag >= n) {
    fail(ErrorKind::InvalidArgument, "acf: lag " + std::to_string(max_lag) + " invalid for n = " + std::to_string(n));
  }
  const double mu = mean(sample);
  std::vector<double> centred(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = sample[i] - mu;
  double gamma0 = 0.0;
  for (double v : centred) gamma0 += v * v;
  if (!(gamma0 > 0.0)) fail(ErrorKind::Degenerate, "acf: zero variance");

  AcfSequence out;
  out.n = n;
  out.values.resize(max_lag + 1);
  out.values[0] = 1.0;
  for (std::size_t l = 1; l <= max_lag; ++l) {
    double g = 0.0;
    for (std::size_t t = 0; t + l < n; ++t) g += centred[t] * centred[t + l];
    out.values[l] = std::clamp(g / gamma0, -1.0, 1.0);
  }
  return out;
}

/// corr(x_{t+h}, y_t) over the overlapping range.
inline double lagged_cross_corr(std::span<const double> x, std::span<const double> y, long h) {
  if (x.size() != y.size()) fail(ErrorKind::InvalidArgument, "lagged_cross_corr: length mismatch");
  const auto n = static_cast<long>(x.size());
  const long overlap = n - std::labs(h);
  if (overlap < 3) fail(ErrorKind::InsufficientData, "lagged_cross_corr: overlap below 3");
  const auto len = static_cast<std::size_t>(overlap);
  if (h >= 0) return pearson_corr(x.subspan(static_cast<std::size_t>(h), len), y.first(len));
  return pearson_corr(x.first(len), y.subspan(static_cast<std::size_t>(-h), len));
}

inline LineFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorKind::InvalidArgument, "ols_fit: length mismatch");
  if (x.size() < 2) fail(ErrorKind::InsufficientData, "ols_fit: need at least 2 points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::Degenerate, "ols_fit: singular design (all x equal)");
  LineFit fit;
  fit.n = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    fit.rss += r * r;
  }
  return fit;
}

/// Quantile of an already sorted sample, linear interpolation at p(n-1)+1.
inline double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(ErrorKind::InsufficientData, "quantile of empty sample");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::InvalidArgument, "quantile probability outside [0, 1]");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline std::vector<double> quantiles(std::span<const double> sample, std::span<const double> probs) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) out.push_back(sorted_quantile(sorted, p));
  return out;
}

inline double median(std::span<const double> sample) {
  const double half[] = {0.5};
  return quantiles(sample, half).front();
}

struct FiveNumber {
  double min, q1, median, q3, max;
};

inline FiveNumber five_number(std::span<const double> sample) {
  if (sample.size() < 5) fail(ErrorKind::InsufficientData, "five_number requires n >= 5");
  const double probs[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  const auto q = quantiles(sample, probs);
  return {q[0], q[1], q[2], q[3], q[4]};
}

struct QQPair {
  double theoretical;
  double empirical;
};

/// Normal QQ pairs at plotting positions (i - 0.5)/n. With `standardize` the
/// empirical column is (x - mean)/sd; otherwise the raw sorted sample.
inline std::vector<QQPair> qq_pairs(std::span<const double> sample, bool standardize = true) {
  const auto n = sample.size();
  if (n < 1) fail(ErrorKind::InsufficientData, "qq_pairs of empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  double mu = 0.0, sd = 1.0;
  if (standardize) {
    if (n < 2) fail(ErrorKind::InsufficientData, "qq_pairs: standardising needs n >= 2");
    mu = mean(sorted);
    sd = std::sqrt(variance(sorted));
    if (!(sd > 0.0)) fail(ErrorKind::Degenerate, "qq_pairs: zero variance");
  }
  std::vector<QQPair> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    out[i] = {dist::normal_quantile(p), (sorted[i] - mu) / sd};
  }
  return out;
}

/// Silverman's rule h = 0.9 min(sd, IQR/1.34) n^(-1/5). Falls back to sd when
/// the IQR collapses to zero.
inline double silverman_bandwidth(std::span<const double> sample) {
  if (sample.size() < 2) fail(ErrorKind::InsufficientData, "kde: need n >= 2");
  const double sd = std::sqrt(variance(sample));
  if (!(sd > 0.0)) fail(ErrorKind::Degenerate, "kde: zero variance");
  const double probs[] = {0.25, 0.75};
  const auto q = quantiles(sample, probs);
  const double iqr = (q[1] - q[0]) / 1.34;
  const double spread = iqr > 0.0 ? std::min(sd, iqr) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(sample.size()), -0.2);
}

/// Gaussian KDE. No boundary correction: mass leaks outside bounded supports
/// such as [0, 1] for p-values.
inline std::vector<double> kde(std::span<const double> sample, std::span<const double> eval_points) {
  const double h = silverman_bandwidth(sample);
  const double norm = 1.0 / (static_cast<double>(sample.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> out;
  out.reserve(eval_points.size());
  for (double x : eval_points) {
    double s = 0.0;
    for (double v : sample) {
      const double u = (x - v) / h;
      s += std::exp(-0.5 * u * u);
    }
    out.push_back(s * norm);
  }
  return out;
}

}  // namespace stylized
