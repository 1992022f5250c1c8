#pragma once

// Synthetic series for demos and tests.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "stylized/error.hpp"
#include "stylized/garch.hpp"
#include "stylized/ingest.hpp"

namespace stylized {

/// GARCH(1,1) with Gaussian innovations. The recursion starts at the
/// unconditional variance and `burn_in` draws are discarded.
inline std::vector<double> simulate_garch11(const GarchParams& p, std::size_t n, std::uint64_t seed,
                                            std::size_t burn_in = 500) {
  if (!detail::in_stationarity_region(p)) fail(ErrorKind::InvalidArgument, "simulate_garch11: non-stationary");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  double s2 = p.omega / (1.0 - p.alpha1 - p.beta1);
  double eps = 0.0;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n + burn_in; ++t) {
    s2 = p.omega + p.alpha1 * eps * eps + p.beta1 * s2;
    eps = std::sqrt(s2) * z(rng);
    if (t >= burn_in) out.push_back(p.mu + eps);
  }
  return out;
}

/// Price path exp(cumsum r) starting at `start_price`, one record per
/// weekday from 2010-01-04, with volume proportional to 1 + |r|/sd times a
/// lognormal factor.
inline PriceSeries synthetic_price_series(std::string ticker, const std::vector<double>& returns,
                                          std::uint64_t seed, double start_price = 100.0) {
  using namespace std::chrono;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> noise(0.0, 0.3);
  double ss = 0.0;
  for (double r : returns) ss += r * r;
  const double sd = returns.empty() ? 1.0 : std::sqrt(ss / static_cast<double>(returns.size()));

  PriceSeries s;
  s.ticker = std::move(ticker);
  sys_days day = sys_days{year{2010} / January / 4};
  auto advance = [&] {
    do {
      day += days{1};
    } while (weekday{day} == Saturday || weekday{day} == Sunday);
  };
  double price = start_price;
  s.records.push_back({year_month_day{day}, price, std::round(1e6 * std::exp(noise(rng)))});
  for (double r : returns) {
    advance();
    price *= std::exp(r);
    const double vol = 1e6 * (1.0 + std::fabs(r) / (sd > 0.0 ? sd : 1.0)) * std::exp(noise(rng));
    s.records.push_back({year_month_day{day}, price, std::round(vol)});
  }
  return s;
}

}  // namespace stylized
