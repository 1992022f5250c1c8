#pragma once

// Gaussian quasi-maximum-likelihood GARCH(1,1) with constant mean:
//   r_t = mu + eps_t,  sigma2_t = omega + alpha1 eps_{t-1}^2 + beta1 sigma2_{t-1}.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "stylized/error.hpp"
#include "stylized/nelder_mead.hpp"
#include "stylized/stats.hpp"
#include "stylized/tail_index.hpp"

namespace stylized {

struct GarchParams {
  double mu = 0.0;
  double omega = 0.0;
  double alpha1 = 0.0;
  double beta1 = 0.0;
};

struct GarchFit {
  double mu = 0.0;
  double omega = 0.0;
  double alpha1 = 0.0;
  double beta1 = 0.0;
  double loglik = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t restarts = 0;

  [[nodiscard]] GarchParams params() const noexcept { return {mu, omega, alpha1, beta1}; }
};

struct ResidualSeries {
  std::vector<double> values;
};

namespace detail {

inline constexpr double kVarianceFloor = 1e-12;

/// Conditional variances sigma2_1..sigma2_n. sigma2_1 is the sample variance
/// of eps; every later value is floored at 1e-12 times that variance.
inline std::vector<double> garch_variances(std::span<const double> returns, const GarchParams& p) {
  const auto n = returns.size();
  double mean_eps = 0.0;
  for (double r : returns) mean_eps += r - p.mu;
  mean_eps /= static_cast<double>(n);
  double var_eps = 0.0;
  for (double r : returns) var_eps += (r - p.mu - mean_eps) * (r - p.mu - mean_eps);
  var_eps /= static_cast<double>(n);
  if (!(var_eps > 0.0)) fail(ErrorKind::Degenerate, "garch: zero residual variance");
  const double floor = kVarianceFloor * var_eps;

  std::vector<double> s2(n);
  s2[0] = var_eps;
  for (std::size_t t = 1; t < n; ++t) {
    const double e = returns[t - 1] - p.mu;
    const double v = p.omega + p.alpha1 * e * e + p.beta1 * s2[t - 1];
    if (!std::isfinite(v)) fail(ErrorKind::NumericOverflow, "garch: non-finite conditional variance");
    s2[t] = std::max(v, floor);
  }
  return s2;
}

inline bool in_stationarity_region(const GarchParams& p) {
  return p.omega > 0.0 && p.alpha1 >= 0.0 && p.beta1 >= 0.0 && p.alpha1 + p.beta1 < 1.0;
}

// Unconstrained coordinates: (mu, log omega, a, b) with
// alpha1 = e^a / (1 + e^a + e^b), beta1 = e^b / (1 + e^a + e^b).
inline GarchParams from_unconstrained(std::span<const double> th) {
  const double ea = std::exp(th[2]);
  const double eb = std::exp(th[3]);
  const double den = 1.0 + ea + eb;
  double alpha = ea / den;
  double beta = eb / den;
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    // Overflowed exponentials; split the unit mass by the larger coordinate.
    alpha = th[2] >= th[3] ? 1.0 : 0.0;
    beta = 1.0 - alpha;
  }
  return {th[0], std::exp(th[1]), alpha, beta};
}

inline std::vector<double> to_unconstrained(const GarchParams& p) {
  const double rest = 1.0 - p.alpha1 - p.beta1;
  return {p.mu, std::log(p.omega), std::log(p.alpha1 / rest), std::log(p.beta1 / rest)};
}

}  // namespace detail

/// Gaussian log-likelihood -1/2 sum [ln 2pi + ln sigma2_t + eps_t^2 / sigma2_t].
inline double garch11_loglik(std::span<const double> returns, const GarchParams& p) {
  if (returns.size() < 100) fail(ErrorKind::InsufficientData, "garch11_loglik requires n >= 100");
  if (!detail::in_stationarity_region(p)) {
    fail(ErrorKind::InvalidArgument, "garch11_loglik: parameters outside the stationarity region");
  }
  const auto s2 = detail::garch_variances(returns, p);
  constexpr double log_2pi = 1.8378770664093454836;
  double ll = 0.0;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    const double e = returns[t] - p.mu;
    ll += log_2pi + std::log(s2[t]) + e * e / s2[t];
  }
  ll *= -0.5;
  if (!std::isfinite(ll)) fail(ErrorKind::NumericOverflow, "garch11_loglik: non-finite likelihood");
  return ll;
}

struct GarchFitOptions {
  NelderMeadOptions simplex{};
  std::size_t fallback_restarts = 2;
};

/// QML fit by Nelder-Mead in unconstrained coordinates. The data are
/// standardised first (mean 0, variance 1), which makes the fit
/// scale-equivariant; parameters are mapped back afterwards.
inline GarchFit garch11_fit(std::span<const double> returns, const GarchFitOptions& opt = {}) {
  const auto n = returns.size();
  if (n < 250) fail(ErrorKind::InsufficientData, "garch11_fit requires n >= 250");
  const double m = mean(returns);
  const double var = variance(returns);
  if (!(var > 0.0)) fail(ErrorKind::Degenerate, "garch11_fit: returns have zero variance");
  const double sd = std::sqrt(var);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = (returns[i] - m) / sd;

  auto objective = [&](const std::vector<double>& th) {
    const auto p = detail::from_unconstrained(th);
    if (!detail::in_stationarity_region(p)) return std::numeric_limits<double>::infinity();
    try {
      return -garch11_loglik(z, p);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const std::vector<double> step{0.05, 0.5, 0.5, 0.5};
  // Start: mu = sample mean, alpha1 = 0.05, beta1 = 0.90, omega = 0.05 var.
  auto start = detail::to_unconstrained({0.0, 0.05, 0.05, 0.90});
  auto best = nelder_mead(objective, start, step, opt.simplex);
  std::size_t iterations = best.iterations;
  std::size_t restarts = 0;
  // Fallbacks: restart from the best point, then from a second canonical start.
  const std::array<std::vector<double>, 2> alt_starts{best.x, detail::to_unconstrained({0.0, 0.1, 0.1, 0.8})};
  for (std::size_t r = 0; r < opt.fallback_restarts && !best.converged; ++r) {
    const auto& from = r == 0 ? best.x : alt_starts[1];
    auto next = nelder_mead(objective, from, step, opt.simplex);
    iterations += next.iterations;
    ++restarts;
    if (next.fx < best.fx || (next.converged && next.fx <= best.fx + 1e-9)) best = std::move(next);
  }

  const auto pz = detail::from_unconstrained(best.x);
  GarchFit fit;
  fit.mu = m + sd * pz.mu;
  fit.omega = var * pz.omega;
  fit.alpha1 = pz.alpha1;
  fit.beta1 = pz.beta1;
  fit.converged = best.converged;
  fit.iterations = iterations;
  fit.restarts = restarts;
  // Likelihood of the original data: the Jacobian of z = (r - m)/sd.
  fit.loglik = -best.fx - static_cast<double>(n) * std::log(sd);
  return fit;
}

inline ResidualSeries standardized_residuals(std::span<const double> returns, const GarchFit& fit) {
  const auto s2 = detail::garch_variances(returns, fit.params());
  ResidualSeries out;
  out.values.resize(returns.size());
  for (std::size_t t = 0; t < returns.size(); ++t) out.values[t] = (returns[t] - fit.mu) / std::sqrt(s2[t]);
  return out;
}

struct ConditionalTailComparison {
  TailIndexResult returns_tail;
  TailIndexResult residuals_tail;
  /// residual alpha < return alpha (Pareto-exponent reading of "decreased")
  bool decreased = false;
  /// residual xi < return xi, i.e. lighter residual tails
  bool xi_decreased = false;
};

inline ConditionalTailComparison conditional_tail_comparison(std::span<const double> returns, const GarchFit& fit,
                                                             const TailIndexOptions& opt = {}) {
  if (!fit.converged) fail(ErrorKind::NotConverged, "conditional_tail_comparison: GARCH fit did not converge");
  ConditionalTailComparison out;
  out.returns_tail = return_tail_index(returns, TailSide::Pooled, opt);
  const auto res = standardized_residuals(returns, fit);
  out.residuals_tail = return_tail_index(res.values, TailSide::Pooled, opt);
  out.decreased = out.residuals_tail.alpha < out.returns_tail.alpha;
  out.xi_decreased = out.residuals_tail.xi < out.returns_tail.xi;
  return out;
}

inline ConditionalTailComparison conditional_tail_comparison(std::span<const double> returns,
                                                             const TailIndexOptions& opt = {}) {
  return conditional_tail_comparison(returns, garch11_fit(returns), opt);
}

}  // namespace stylized
