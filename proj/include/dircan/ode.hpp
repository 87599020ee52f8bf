#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "dircan/errors.hpp"
#include "dircan/mat2.hpp"

namespace dircan {

struct integrate_options {
  double rel_tol = 1e-12;
  double h_init = 0.0;  // 0 = choose automatically
  double h_min = 1e-13;
  std::int64_t max_steps = 5'000'000;
  // Sorted ascending; steps never straddle a breakpoint (kinks of piecewise
  // coefficient data live there).
  const std::vector<double>* breakpoints = nullptr;
};

namespace detail {

// Fourth-order two-point Gauss Magnus step for T' = A(x) T over [x, x+h]:
//   Omega = (h/2)(A1 + A2) + (sqrt(3) h^2 / 12) [A2, A1],
// A evaluated at the Gauss nodes x + (1/2 -/+ sqrt(3)/6) h.  The exponential
// is evaluated in closed form; for traceless A the step matrix has
// determinant exactly cosh^2 - mu^2 sinhc^2 = 1 up to rounding.
template <class Rhs>
CMat2 magnus4_step(const Rhs& A, double x, double h) {
  constexpr double s3 = 1.7320508075688772;
  const CMat2 a1 = A(x + (0.5 - s3 / 6.0) * h);
  const CMat2 a2 = A(x + (0.5 + s3 / 6.0) * h);
  const CMat2 omega =
      (0.5 * h) * (a1 + a2) + (s3 * h * h / 12.0) * commutator(a2, a1);
  return expm(omega);
}

}  // namespace detail

// Propagates T' = A(x) T from x0 to x1 (either direction) with adaptive step
// doubling on the 4th-order Magnus scheme.  Error is controlled per step,
// relative to the step matrix.
template <class Rhs>
CMat2 propagate(const Rhs& A, double x0, double x1, CMat2 T,
                const integrate_options& opt = {}) {
  if (x0 == x1) return T;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);

  double h = opt.h_init > 0 ? opt.h_init : std::min(span, 0.1);
  // Keep the initial step sane when A is large (stiff oscillatory regime).
  {
    const double a0 = A(x0).norm_max();
    if (a0 > 0) h = std::min(h, 1.0 / a0);
  }

  double x = x0;
  std::int64_t steps = 0;
  while (dir * (x1 - x) > 0) {
    if (++steps > opt.max_steps)
      throw integration_failure("propagate: step budget exhausted");
    double hs = std::min(h, std::abs(x1 - x));
    // Clip to the next breakpoint in the direction of travel.
    if (opt.breakpoints) {
      const auto& bp = *opt.breakpoints;
      if (dir > 0) {
        auto it = std::upper_bound(bp.begin(), bp.end(), x + 1e-300);
        if (it != bp.end() && *it < x + hs) hs = *it - x;
      } else {
        auto it = std::lower_bound(bp.begin(), bp.end(), x - 1e-300);
        if (it != bp.begin() && *(--it) > x - hs) hs = x - *it;
      }
      if (hs <= 0) hs = std::min(h, std::abs(x1 - x));
    }
    const double hstep = dir * hs;

    const CMat2 full = detail::magnus4_step(A, x, hstep);
    const CMat2 half1 = detail::magnus4_step(A, x, 0.5 * hstep);
    const CMat2 half2 = detail::magnus4_step(A, x + 0.5 * hstep, 0.5 * hstep);
    const CMat2 fine = half2 * half1;
    const double err = (full - fine).norm_max() / std::max(1.0, fine.norm_max());

    if (err <= opt.rel_tol) {
      T = fine * T;
      x += hstep;
      const double grow =
          err > 0 ? 0.9 * std::pow(opt.rel_tol / err, 0.2) : 5.0;
      h = hs * std::clamp(grow, 0.2, 5.0);
    } else {
      h = hs * std::clamp(0.9 * std::pow(opt.rel_tol / err, 0.2), 0.1, 0.9);
      if (h < opt.h_min)
        throw integration_failure("propagate: step size underflow");
    }
  }
  return T;
}

// ---------------------------------------------------------------------------
// Adaptive scalar ODE y' = f(x, y), classic Cash-Karp 4(5) embedded pair.
// Used for the gauge-angle equation; records y at the requested nodes.
// ---------------------------------------------------------------------------
template <class Rhs>
std::vector<double> integrate_scalar(const Rhs& f, double y0,
                                     const std::vector<double>& nodes,
                                     double rel_tol = 1e-12) {
  if (nodes.empty()) return {};
  std::vector<double> out;
  out.reserve(nodes.size());
  out.push_back(y0);

  double y = y0;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    double x = nodes[k - 1];
    const double xe = nodes[k];
    const double dir = xe >= x ? 1.0 : -1.0;
    double h = dir * std::max(1e-12, std::abs(xe - x) / 4.0);
    std::int64_t guard = 0;
    while (dir * (xe - x) > 0) {
      if (++guard > 2'000'000)
        throw integration_failure("integrate_scalar: step budget exhausted");
      if (dir * (x + h - xe) > 0) h = xe - x;
      const double k1 = f(x, y);
      const double k2 = f(x + h / 5.0, y + h * k1 / 5.0);
      const double k3 = f(x + 3.0 * h / 10.0, y + h * (3.0 * k1 + 9.0 * k2) / 40.0);
      const double k4 = f(x + 3.0 * h / 5.0,
                          y + h * (0.3 * k1 - 0.9 * k2 + 1.2 * k3));
      const double k5 = f(x + h, y + h * (-11.0 * k1 / 54.0 + 2.5 * k2 -
                                          70.0 * k3 / 27.0 + 35.0 * k4 / 27.0));
      const double k6 =
          f(x + 7.0 * h / 8.0,
            y + h * (1631.0 * k1 / 55296.0 + 175.0 * k2 / 512.0 +
                     575.0 * k3 / 13824.0 + 44275.0 * k4 / 110592.0 +
                     253.0 * k5 / 4096.0));
      const double y5 = y + h * (37.0 * k1 / 378.0 + 250.0 * k3 / 621.0 +
                                 125.0 * k4 / 594.0 + 512.0 * k6 / 1771.0);
      const double y4 = y + h * (2825.0 * k1 / 27648.0 + 18575.0 * k3 / 48384.0 +
                                 13525.0 * k4 / 55296.0 + 277.0 * k5 / 14336.0 +
                                 k6 / 4.0);
      const double err = std::abs(y5 - y4) / std::max(1.0, std::abs(y5));
      if (err <= rel_tol) {
        x += h;
        y = y5;
        h *= std::clamp(err > 0 ? 0.9 * std::pow(rel_tol / err, 0.2) : 5.0,
                        0.2, 5.0);
      } else {
        h *= std::clamp(0.9 * std::pow(rel_tol / err, 0.25), 0.1, 0.9);
        if (std::abs(h) < 1e-14)
          throw integration_failure("integrate_scalar: step size underflow");
      }
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace dircan
