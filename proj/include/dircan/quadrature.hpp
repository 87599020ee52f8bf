#pragma once

#include <functional>
#include <numbers>
#include <vector>

#include "dircan/mat2.hpp"

namespace dircan {

// Taylor coefficients c_0..c_N of f about `center` by the discrete Cauchy
// formula on |lambda - center| = radius (trapezoid rule, spectrally accurate
// for f analytic in the closed disk).  With offset_half = true the nodes sit
// at angles 2 pi (k + 1/2) / n, which keeps them off the real axis when the
// circle crosses it.
inline std::vector<cplx> cauchy_taylor(const std::function<cplx(cplx)>& f,
                                       cplx center, double radius, int N,
                                       int nodes, bool offset_half = false) {
  std::vector<cplx> vals(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) {
    const double th = 2.0 * std::numbers::pi *
                      (k + (offset_half ? 0.5 : 0.0)) / nodes;
    vals[static_cast<std::size_t>(k)] =
        f(center + radius * cplx(std::cos(th), std::sin(th)));
  }
  std::vector<cplx> c(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) {
    cplx s = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const double th = 2.0 * std::numbers::pi *
                        (k + (offset_half ? 0.5 : 0.0)) / nodes;
      s += vals[static_cast<std::size_t>(k)] *
           cplx(std::cos(n * th), -std::sin(n * th));
    }
    c[static_cast<std::size_t>(n)] =
        s / (static_cast<double>(nodes) * std::pow(radius, n));
  }
  return c;
}

// Neville polynomial extrapolation of (xs, ys) to x_eval.
inline cplx neville_extrapolate(const std::vector<double>& xs,
                                std::vector<cplx> ys, double x_eval) {
  const std::size_t n = xs.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t k = 0; k + m < n; ++k)
      ys[k] = ((x_eval - xs[k + m]) * ys[k] + (xs[k] - x_eval) * ys[k + 1]) /
              (xs[k] - xs[k + m]);
  return ys[0];
}

}  // namespace dircan
