#pragma once

// Nelder-Mead downhill simplex minimiser.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "stylized/error.hpp"

namespace stylized {

struct NelderMeadOptions {
  std::size_t max_iterations = 2000;
  /// Stop once every vertex is within this max-norm distance of the best.
  double diameter_tol = 1e-8;
  double reflect = 1.0;
  double expand = 2.0;
  double contract = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  double diameter = 0.0;
  bool converged = false;
  /// Final simplex, best vertex first.
  std::vector<std::vector<double>> simplex;
  std::vector<double> values;
};

/// Minimises `f` from `x0` with an axis-aligned initial simplex of size
/// `step[i]` along coordinate i. Non-finite objective values are treated as
/// +infinity so the simplex retreats from infeasible regions.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x0, const std::vector<double>& step,
                                    const NelderMeadOptions& opt = {}) {
  const std::size_t dim = x0.size();
  if (dim == 0 || step.size() != dim) fail(ErrorKind::InvalidArgument, "nelder_mead: bad dimensions");

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> pts(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += step[i];
  std::vector<double> vals(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(dim + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2(dim + 1);
    std::vector<double> v2(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
      p2[i] = std::move(pts[order[i]]);
      v2[i] = vals[order[i]];
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) d = std::max(d, std::fabs(pts[i][j] - pts[0][j]));
    }
    return d;
  };
  auto along = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> p(dim);
    for (std::size_t j = 0; j < dim; ++j) p[j] = c[j] + t * (w[j] - c[j]);
    return p;
  };

  sort_simplex();
  std::vector<double> centroid(dim);
  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    res.diameter = diameter();
    if (res.diameter < opt.diameter_tol) {
      res.converged = true;
      break;
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += pts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    const auto& worst = pts[dim];
    auto xr = along(centroid, worst, -opt.reflect);
    const double fr = eval(xr);
    if (fr < vals[0]) {
      auto xe = along(centroid, worst, -opt.reflect * opt.expand);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[dim] = std::move(xe);
        vals[dim] = fe;
      } else {
        pts[dim] = std::move(xr);
        vals[dim] = fr;
      }
    } else if (fr < vals[dim - 1]) {
      pts[dim] = std::move(xr);
      vals[dim] = fr;
    } else {
      const bool outside = fr < vals[dim];
      auto xc = outside ? along(centroid, xr, opt.contract) : along(centroid, worst, opt.contract);
      const double fc = eval(xc);
      if (fc < (outside ? fr : vals[dim])) {
        pts[dim] = std::move(xc);
        vals[dim] = fc;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          pts[i] = along(pts[0], pts[i], opt.shrink);
          vals[i] = eval(pts[i]);
        }
      }
    }
    sort_simplex();
  }
  if (!res.converged) {
    res.diameter = diameter();
    res.converged = res.diameter < opt.diameter_tol;
  }
  res.x = pts[0];
  res.fx = vals[0];
  res.simplex = pts;
  res.values = vals;
  return res;
}

}  // namespace stylized
