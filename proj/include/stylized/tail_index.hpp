#pragma once

// Hill tail-index estimation with a KS-distance choice of the number of upper
// order statistics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "stylized/error.hpp"
#include "stylized/stats.hpp"

namespace stylized {

struct TailIndexResult {
  double xi = 0.0;  ///< extreme-value index
  double alpha = std::numeric_limits<double>::infinity();  ///< Pareto exponent 1/xi
  std::size_t k = 0;
  std::size_t n = 0;
  bool heavy_tailed = false;
  /// KS distance between the tail and the fitted Pareto at the chosen k.
  double ks_distance = 0.0;
  /// Log-likelihoods of the k exceedances under the fitted Pareto tail and
  /// under a shifted exponential tail (the light-tail alternative).
  double pareto_loglik = 0.0;
  double exponential_loglik = 0.0;
  /// Vuong z of Pareto over exponential on the exceedances.
  double preference_z = 0.0;

  [[nodiscard]] bool alpha_finite() const noexcept { return std::isfinite(alpha); }
};

struct TailIndexOptions {
  std::size_t k_min = 10;
  std::size_t grid_points = 50;
  /// heavy_tailed requires xi > this at the selected k.
  double heavy_xi_cutoff = 0.05;
  /// ... and, when set, that the Pareto tail out-fits the exponential tail.
  /// Hill is positively biased on light tails (xi ~ 1/u for exponential
  /// data), so the xi cutoff alone flags Gaussian samples as heavy.
  bool require_pareto_preference = true;
  /// One-sided Vuong z the preference must exceed.
  double preference_z = 1.0;
  /// xi at or below this is treated as "no admissible k".
  double admissible_xi = 1e-6;
};

/// Hill estimate on an ascending-sorted sample of positives:
/// (1/k) sum_{i=1..k} ln X(n-i+1) - ln X(n-k).
inline double hill_estimate_sorted(std::span<const double> sorted, std::size_t k) {
  const auto n = sorted.size();
  if (k < 2 || k >= n) fail(ErrorKind::InvalidArgument, "hill_estimate: need 2 <= k < n");
  const double threshold = sorted[n - k - 1];
  if (!(threshold > 0.0)) fail(ErrorKind::InsufficientTail, "hill_estimate: fewer than k+1 positive values");
  const double log_u = std::log(threshold);
  double s = 0.0;
  for (std::size_t i = n - k; i < n; ++i) s += std::log(sorted[i]) - log_u;
  return s / static_cast<double>(k);
}

inline double hill_estimate(std::span<const double> sample, std::size_t k) {
  std::vector<double> positives;
  positives.reserve(sample.size());
  for (double v : sample) {
    if (v > 0.0) positives.push_back(v);
  }
  if (positives.size() <= k) fail(ErrorKind::InsufficientTail, "hill_estimate: fewer than k+1 positive values");
  std::sort(positives.begin(), positives.end());
  return hill_estimate_sorted(positives, k);
}

namespace detail {

/// Up to `points` log-spaced integers in [lo, hi], deduplicated, ascending.
inline std::vector<std::size_t> log_grid(std::size_t lo, std::size_t hi, std::size_t points) {
  std::vector<std::size_t> grid;
  if (hi < lo) return grid;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    const auto k = static_cast<std::size_t>(std::lround(std::exp(a + t * (b - a))));
    if (grid.empty() || grid.back() != k) grid.push_back(std::clamp(k, lo, hi));
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

/// sup |F_k - F_Pareto| over the k exceedances of threshold sorted[n-k-1].
inline double pareto_ks_distance(std::span<const double> sorted, std::size_t k, double alpha) {
  const auto n = sorted.size();
  const double u = sorted[n - k - 1];
  const auto dk = static_cast<double>(k);
  double d = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double y = sorted[n - k + i];
    const double f = 1.0 - std::pow(y / u, -alpha);
    d = std::max({d, (static_cast<double>(i) + 1.0) / dk - f, f - static_cast<double>(i) / dk});
  }
  return d;
}

struct TailLogLik {
  double pareto;
  double exponential;
  double vuong_z;
};

/// Both models have one free parameter fitted by maximum likelihood on the
/// exceedances of u = sorted[n-k-1], so the log-likelihoods compare directly.
inline TailLogLik tail_logliks(std::span<const double> sorted, std::size_t k, double xi) {
  const auto n = sorted.size();
  const double u = sorted[n - k - 1];
  const auto dk = static_cast<double>(k);
  double sum_excess = 0.0;
  for (std::size_t i = n - k; i < n; ++i) sum_excess += sorted[i] - u;
  TailLogLik out{};
  if (!(sum_excess > 0.0)) {
    out.exponential = std::numeric_limits<double>::infinity();
    out.vuong_z = -std::numeric_limits<double>::infinity();
    return out;
  }
  const double alpha = 1.0 / xi;
  const double log_u = std::log(u);
  const double lambda = dk / sum_excess;
  // pointwise log-density differences
  double sum_d = 0.0, sum_d2 = 0.0;
  for (std::size_t i = n - k; i < n; ++i) {
    const double lp = std::log(alpha) + alpha * log_u - (alpha + 1.0) * std::log(sorted[i]);
    const double le = std::log(lambda) - lambda * (sorted[i] - u);
    out.pareto += lp;
    out.exponential += le;
    sum_d += lp - le;
    sum_d2 += (lp - le) * (lp - le);
  }
  const double md = sum_d / dk;
  const double sd = std::sqrt(std::max(sum_d2 / dk - md * md, 0.0));
  out.vuong_z = sd > 0.0 ? sum_d / (std::sqrt(dk) * sd) : (md > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return out;
}

}  // namespace detail

/// Evaluates Hill over a log-spaced k grid in [k_min, n/4] and keeps the k
/// whose fitted Pareto tail is closest (KS distance) to the empirical tail.
/// Ties go to the smallest k.
inline TailIndexResult adaptive_tail_index(std::span<const double> sample, const TailIndexOptions& opt = {}) {
  if (sample.size() < 100) fail(ErrorKind::InsufficientData, "adaptive_tail_index requires n >= 100");
  std::vector<double> sorted;
  sorted.reserve(sample.size());
  for (double v : sample) {
    if (v > 0.0) sorted.push_back(v);
  }
  if (sorted.size() < 50) fail(ErrorKind::InsufficientTail, "adaptive_tail_index requires >= 50 positive values");
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();

  const auto grid = detail::log_grid(opt.k_min, std::max<std::size_t>(n / 4, opt.k_min), opt.grid_points);
  TailIndexResult best;
  best.n = sample.size();
  double best_d = std::numeric_limits<double>::infinity();
  bool any_admissible = false;
  double first_xi = 0.0;
  std::size_t first_k = 0;
  for (std::size_t k : grid) {
    if (k < 2 || k >= n || !(sorted[n - k - 1] > 0.0)) continue;
    const double xi = hill_estimate_sorted(sorted, k);
    if (first_k == 0) {
      first_k = k;
      first_xi = xi;
    }
    if (!(xi > opt.admissible_xi)) continue;
    any_admissible = true;
    const double d = detail::pareto_ks_distance(sorted, k, 1.0 / xi);
    if (d < best_d) {
      best_d = d;
      best.k = k;
      best.xi = xi;
    }
  }
  if (first_k == 0) fail(ErrorKind::InsufficientTail, "adaptive_tail_index: no usable k");
  if (!any_admissible) {
    best.k = first_k;
    best.xi = std::max(first_xi, 0.0);
    best.alpha = std::numeric_limits<double>::infinity();
    best.heavy_tailed = false;
    best.ks_distance = std::numeric_limits<double>::quiet_NaN();
    return best;
  }
  best.alpha = 1.0 / best.xi;
  best.ks_distance = best_d;
  const auto ll = detail::tail_logliks(sorted, best.k, best.xi);
  best.pareto_loglik = ll.pareto;
  best.exponential_loglik = ll.exponential;
  best.preference_z = ll.vuong_z;
  best.heavy_tailed = best.xi > opt.heavy_xi_cutoff && (!opt.require_pareto_preference || ll.vuong_z > opt.preference_z);
  return best;
}

enum class TailSide { Pooled, Upper, Lower };

/// Tail index of demeaned returns. Pooled uses |r - mean|; Upper/Lower use
/// the positive part of (r - mean) or -(r - mean).
inline TailIndexResult return_tail_index(std::span<const double> returns, TailSide side = TailSide::Pooled,
                                         const TailIndexOptions& opt = {}) {
  if (returns.size() < 2) fail(ErrorKind::InsufficientData, "return_tail_index: series too short");
  if (std::all_of(returns.begin(), returns.end(), [&](double r) { return r == returns.front(); })) {
    fail(ErrorKind::InsufficientTail, "return_tail_index: constant returns have no tail");
  }
  const double mu = mean(returns);
  std::vector<double> tail;
  tail.reserve(returns.size());
  for (double r : returns) {
    const double d = r - mu;
    switch (side) {
      case TailSide::Pooled: tail.push_back(std::fabs(d)); break;
      case TailSide::Upper: tail.push_back(d); break;
      case TailSide::Lower: tail.push_back(-d); break;
    }
  }
  return adaptive_tail_index(tail, opt);
}

}  // namespace stylized
