#pragma once

// Reference distributions for p-values. Thin wrappers over Boost.Math plus
// the Kolmogorov limiting distribution, which Boost 1.74 does not ship.

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "stylized/error.hpp"

namespace stylized::dist {

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Upper tail 1 - Phi(x), accurate far into the tail.
inline double normal_sf(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    fail(ErrorKind::InvalidArgument, "normal_quantile: p must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::normal_distribution<double>{}, p);
}

/// Survival function of chi-square with `df` degrees of freedom.
inline double chi_square_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  if (df == 2.0) return std::exp(-0.5 * x);
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

/// Two-sided p-value of a Student-t statistic.
inline double student_t_two_sided(double t, double df) {
  const boost::math::students_t_distribution<double> st(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(st, std::fabs(t))), 0.0, 1.0);
}

inline double normal_two_sided(double z) {
  return std::clamp(2.0 * normal_sf(std::fabs(z)), 0.0, 1.0);
}

/// P(K > lambda) for the Kolmogorov limiting distribution, summed until the
/// next term is below `tol`. Uses the theta-function form for small lambda
/// where the alternating series converges slowly.
inline double kolmogorov_sf(double lambda, double tol = 1e-10) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.0) {
    // 1 - sqrt(2 pi)/lambda * sum exp(-(2k-1)^2 pi^2 / (8 lambda^2))
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k < 1000; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * c);
      cdf += term;
      if (term < tol) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < tol) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace stylized::dist
