#pragma once

// Random samples used by the oracle tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace testgen {

inline std::vector<double> gaussian(std::size_t n, std::uint64_t seed, double mu = 0.0, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(mu, sd);
  std::vector<double> out(n);
  for (auto& x : out) x = d(rng);
  return out;
}

inline std::vector<double> uniform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = d(rng);
  return out;
}

inline std::vector<double> exponential(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> d(1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = d(rng);
  return out;
}

/// Pareto with P[X > x] = x^-alpha for x >= 1, by inversion.
inline std::vector<double> pareto(std::size_t n, double alpha, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = std::pow(1.0 - d(rng), -1.0 / alpha);
  return out;
}

inline std::vector<double> student_t(std::size_t n, double df, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::student_t_distribution<double> d(df);
  std::vector<double> out(n);
  for (auto& x : out) x = d(rng);
  return out;
}

inline std::vector<double> abs_values(std::vector<double> v) {
  for (auto& x : v) x = std::fabs(x);
  return v;
}

/// GARCH(1,1) driven by unit-variance Student-t innovations.
inline std::vector<double> garch_t(double omega, double a, double b, double df, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::student_t_distribution<double> t(df);
  const double scale = std::sqrt((df - 2.0) / df);
  double s2 = omega / (1.0 - a - b), eps = 0.0;
  std::vector<double> out;
  for (std::size_t i = 0; i < n + 500; ++i) {
    s2 = omega + a * eps * eps + b * s2;
    eps = std::sqrt(s2) * scale * t(rng);
    if (i >= 500) out.push_back(eps);
  }
  return out;
}

/// Fractional Gaussian noise by circulant embedding (Davies-Harte).
inline std::vector<double> fgn(std::size_t n, double H, std::uint64_t seed) {
  const std::size_t m = 2 * n;
  auto gamma = [H](double k) {
    return 0.5 * (std::pow(std::fabs(k + 1), 2 * H) - 2 * std::pow(std::fabs(k), 2 * H) +
                  std::pow(std::fabs(k - 1), 2 * H));
  };
  std::vector<std::complex<double>> c(m), lam(m), z(m), y(m);
  for (std::size_t k = 0; k <= n; ++k) c[k] = gamma(static_cast<double>(k));
  for (std::size_t k = n + 1; k < m; ++k) c[k] = gamma(static_cast<double>(m - k));
  auto fft = [m](std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) {
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(m), reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
  };
  fft(c, lam);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double l = lam[k].real();
    if (l < -1e-9) throw std::runtime_error("fgn: circulant embedding not nonnegative");
    const double s = std::sqrt(std::max(l, 0.0) / static_cast<double>(m));
    const double re = g(rng);
    const double im = g(rng);
    z[k] = s * std::complex<double>(re, im);
  }
  fft(z, y);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i].real();
  return out;
}


}  // namespace testgen
