#pragma once

// Rescaled-range (R/S) estimation of the Hurst exponent.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "stylized/error.hpp"
#include "stylized/stats.hpp"

namespace stylized {

struct RescaledRange {
  double mean_rs = 0.0;
  std::size_t blocks = 0;
  std::size_t skipped = 0;  ///< zero-variance blocks left out of the mean
};

struct HurstResult {
  double H = 0.5;          ///< clamped to [0, 1]
  double raw_slope = 0.5;  ///< unclamped regression slope
  std::vector<std::size_t> grid;
  std::vector<double> rs_values;
  LineFit fit;
  std::size_t skipped_blocks = 0;
};

/// Mean R/S over floor(n/l) consecutive blocks of length l; the remainder is
/// discarded. S uses 1/l weighting.
inline RescaledRange rescaled_range(std::span<const double> series, std::size_t l) {
  if (l < 8) fail(ErrorKind::InvalidArgument, "rs_statistic: block length must be >= 8");
  if (series.size() < 2 * l) fail(ErrorKind::InsufficientData, "rs_statistic: need at least two blocks");
  const std::size_t m = series.size() / l;
  RescaledRange out;
  double total = 0.0;
  for (std::size_t b = 0; b < m; ++b) {
    const auto block = series.subspan(b * l, l);
    if (std::all_of(block.begin(), block.end(), [&](double v) { return v == block.front(); })) {
      ++out.skipped;
      continue;
    }
    double mu = 0.0;
    for (double v : block) mu += v;
    mu /= static_cast<double>(l);
    double cum = 0.0, lo = 0.0, hi = 0.0, ss = 0.0;
    for (double v : block) {
      const double d = v - mu;
      cum += d;
      lo = std::min(lo, cum);
      hi = std::max(hi, cum);
      ss += d * d;
    }
    const double s = std::sqrt(ss / static_cast<double>(l));
    if (!(s > 0.0)) {
      ++out.skipped;
      continue;
    }
    total += (hi - lo) / s;
    ++out.blocks;
  }
  if (out.blocks == 0) fail(ErrorKind::Degenerate, "rs_statistic: every block has zero variance");
  out.mean_rs = total / static_cast<double>(out.blocks);
  return out;
}

inline double rs_statistic(std::span<const double> series, std::size_t l) {
  return rescaled_range(series, l).mean_rs;
}

/// H = slope of log(R/S)_l on log l over l = 8, 16, ..., <= n/2.
inline HurstResult hurst(std::span<const double> series) {
  if (series.size() < 64) fail(ErrorKind::InsufficientData, "hurst requires n >= 64");
  HurstResult out;
  std::vector<double> log_l, log_rs;
  for (std::size_t l = 8; l <= series.size() / 2; l *= 2) {
    const auto rr = rescaled_range(series, l);
    out.grid.push_back(l);
    out.rs_values.push_back(rr.mean_rs);
    out.skipped_blocks += rr.skipped;
    log_l.push_back(std::log(static_cast<double>(l)));
    log_rs.push_back(std::log(rr.mean_rs));
  }
  if (out.grid.size() < 3) fail(ErrorKind::InsufficientData, "hurst: fewer than 3 block lengths");
  out.fit = ols_fit(log_l, log_rs);
  out.raw_slope = out.fit.slope;
  out.H = std::clamp(out.fit.slope, 0.0, 1.0);
  return out;
}

}  // namespace stylized
