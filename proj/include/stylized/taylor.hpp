#pragma once

// Taylor effect (lag-1 autocorrelation of |r|^d as a function of d) and the
// kurtosis test used for intermittency.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stylized/distributions.hpp"
#include "stylized/error.hpp"
#include "stylized/stats.hpp"

namespace stylized {

enum class TaylorMethod { Bisection, Newton, GridFallback };

constexpr std::string_view to_string(TaylorMethod m) {
  switch (m) {
    case TaylorMethod::Bisection: return "bisection";
    case TaylorMethod::Newton: return "newton";
    case TaylorMethod::GridFallback: return "grid-fallback";
  }
  return "unknown";
}

struct TaylorResult {
  double d_star = 1.0;
  double acf_at_d_star = 0.0;
  double acf_abs = 0.0;  ///< lag-1 ACF of |r|
  double acf_sq = 0.0;   ///< lag-1 ACF of r^2
  bool abs_exceeds_sq = false;
  TaylorMethod method = TaylorMethod::Bisection;
  double d_lo = 0.125;
  double d_hi = 4.0;
  /// More than half of the returns are exactly zero.
  bool unreliable = false;
};

struct TaylorOptions {
  double d_lo = 0.125;
  double d_hi = 4.0;
  double fd_step = 1e-4;
  double gradient_tol = 1e-8;
  double bracket_tol = 1e-7;
  std::size_t grid_points = 64;
  std::size_t max_newton = 50;
};

/// Lag-1 autocorrelation of |r_t|^d.
inline double power_acf1(std::span<const double> returns, double d) {
  if (returns.size() < 30) fail(ErrorKind::InsufficientData, "power_acf1 requires n >= 30");
  if (!(d > 0.0)) fail(ErrorKind::InvalidArgument, "power_acf1: d must be positive");
  std::vector<double> p(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) p[i] = std::pow(std::fabs(returns[i]), d);
  try {
    return acf(p, 1)[1];
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Degenerate) throw;
    fail(ErrorKind::Degenerate, "power_acf1: |r|^d has zero variance at d = " + std::to_string(d));
  }
}

/// Maximises an objective g over [lo, hi]. The best point of a uniform grid
/// picks the bracket; g' (central differences) is then bisected on its sign
/// and polished by Newton steps on g'. When g is monotone toward an endpoint
/// that endpoint is returned with method GridFallback.
inline TaylorResult maximize_objective(const std::function<double(double)>& g, const TaylorOptions& opt = {}) {
  const double lo = opt.d_lo;
  const double hi = opt.d_hi;
  const double h = opt.fd_step;
  const std::size_t m = std::max<std::size_t>(opt.grid_points, 3);
  const double spacing = (hi - lo) / static_cast<double>(m - 1);

  std::vector<double> grid(m), values(m);
  std::size_t best = 0;
  for (std::size_t i = 0; i < m; ++i) {
    grid[i] = i + 1 == m ? hi : lo + spacing * static_cast<double>(i);
    values[i] = g(grid[i]);
    if (values[i] > values[best]) best = i;
  }

  auto deriv = [&](double d) {
    const double a = std::max(lo, d - h);
    const double b = std::min(hi, d + h);
    return (g(b) - g(a)) / (b - a);
  };
  auto second = [&](double d) {
    const double a = std::max(lo, d - h);
    const double b = std::min(hi, d + h);
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    return (g(b) - 2.0 * g(c) + g(a)) / (half * half);
  };

  TaylorResult out;
  out.d_lo = lo;
  out.d_hi = hi;

  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[best + 1 == m ? m - 1 : best + 1];
  double ga = deriv(a);
  double gb = deriv(b);

  // Monotone up to an endpoint: the maximum sits on the boundary.
  if ((best == 0 && ga <= 0.0) || (best + 1 == m && gb >= 0.0)) {
    out.d_star = grid[best];
    out.acf_at_d_star = values[best];
    out.method = TaylorMethod::GridFallback;
    return out;
  }
  if (best == 0) {
    // g'(lo) > 0 but g(lo) is the grid best: the peak is inside [lo, grid[1]].
    b = grid[1];
    gb = deriv(b);
  } else if (best + 1 == m) {
    a = grid[m - 2];
    ga = deriv(a);
  }

  double d = grid[best];
  if (ga > 0.0 && gb < 0.0) {
    while (b - a > opt.bracket_tol) {
      const double mid = 0.5 * (a + b);
      const double gm = deriv(mid);
      if (gm > 0.0) {
        a = mid;
      } else {
        b = mid;
      }
    }
    d = 0.5 * (a + b);
    out.method = TaylorMethod::Bisection;
    const double lo_b = a - 2.0 * spacing;
    const double hi_b = b + 2.0 * spacing;
    double x = d;
    for (std::size_t it = 0; it < opt.max_newton; ++it) {
      const double g1 = deriv(x);
      if (std::fabs(g1) < opt.gradient_tol) {
        if (g(x) >= g(d)) {
          d = x;
          out.method = TaylorMethod::Newton;
        }
        break;
      }
      const double g2 = second(x);
      if (!(g2 < 0.0)) break;
      const double next = x - g1 / g2;
      if (!(next > std::max(lo, lo_b) && next < std::min(hi, hi_b))) break;
      x = next;
    }
  }

  const double gd = g(d);
  if (gd + 1e-9 < values[best]) {
    d = grid[best];
    out.method = TaylorMethod::GridFallback;
  }
  out.d_star = d;
  out.acf_at_d_star = g(d);
  return out;
}

/// Exponent d in [d_lo, d_hi] maximising the lag-1 ACF of |r|^d.
inline TaylorResult maximize_taylor_d(std::span<const double> returns, const TaylorOptions& opt = {}) {
  if (returns.size() < 30) fail(ErrorKind::InsufficientData, "maximize_taylor_d requires n >= 30");
  std::size_t zeros = 0;
  for (double r : returns) zeros += r == 0.0;
  auto out = maximize_objective([&](double d) { return power_acf1(returns, d); }, opt);
  out.acf_abs = power_acf1(returns, 1.0);
  out.acf_sq = power_acf1(returns, 2.0);
  out.abs_exceeds_sq = out.acf_abs > out.acf_sq;
  out.unreliable = 2 * zeros > returns.size();
  return out;
}

struct KurtosisTestResult {
  double K = 3.0;
  double statistic = 0.0;
  double p_value = 0.5;
};

/// One-sided test of K = 3 against K > 3: sqrt(n)(K - 3)/sqrt(24) ~ N(0, 1).
inline KurtosisTestResult kurtosis_test_from_k(double K, std::size_t n) {
  const double stat = std::sqrt(static_cast<double>(n)) * (K - 3.0) / std::sqrt(24.0);
  return {K, stat, dist::normal_sf(stat)};
}

inline KurtosisTestResult kurtosis_test(std::span<const double> sample) {
  if (sample.size() < 20) fail(ErrorKind::InsufficientData, "kurtosis_test requires n >= 20");
  const auto m = moments(sample);
  return kurtosis_test_from_k(m.kurtosis, m.n);
}

}  // namespace stylized
