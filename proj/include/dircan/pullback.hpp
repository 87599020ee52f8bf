#pragma once

#include <algorithm>
#include <vector>

#include "dircan/errors.hpp"
#include "dircan/mat2.hpp"
#include "dircan/ode.hpp"
#include "dircan/sphere.hpp"

namespace dircan {

// One record per pull-back stage: half-line length, value, chordal step.
struct m_stage {
  double L;
  RiemannPoint m;
  double diff;
};

namespace detail {

// Limit-point algorithm shared by the Dirac and canonical m solvers: seed i
// at x = L, pull back through T(L; z)^{-1} acting as a Moebius map, and
// double L (starting from 4 / Im z) until successive values differ by less
// than tol in the chordal metric.  The unique attracting direction makes the
// seed choice immaterial in the limit.
template <class Rhs>
RiemannPoint weyl_pullback(const Rhs& A, double im_z, double dom_max,
                           double tol, const std::vector<double>* bps,
                           std::vector<m_stage>* trace) {
  const double cap = 16384.0;
  integrate_options opt;
  opt.rel_tol = std::clamp(tol / 10.0, 1e-14, 1e-6);
  opt.breakpoints = bps;

  double L = std::min({4.0 / im_z, cap, dom_max});
  // On a finite domain leave room for at least two doublings, so convergence
  // can still be measured by successive differences.
  if (dom_max < cap) L = std::min(L, 0.25 * dom_max);
  if (!(L > 0.0))
    throw domain_exceeded("weyl_pullback: empty right half line");

  CMat2 T = CMat2::identity();
  double x = 0.0;
  auto extend = [&](double x_to) {
    T = propagate(A, x, x_to, T, opt);
    x = x_to;
    // Only the projective action matters; rescale before entries overflow.
    const double s = T.norm_max();
    if (s > 1e120) T = T / cplx(s);
  };

  extend(L);
  RiemannPoint prev = lft(T.adjugate(), RiemannPoint(iu));
  while (true) {
    const double Ln = std::min({2.0 * L, cap, dom_max});
    if (!(Ln > L * (1.0 + 1e-12))) {
      if (dom_max < cap)
        throw domain_exceeded(
            "weyl_pullback: domain exhausted before convergence");
      throw no_convergence(
          "weyl_pullback: no contraction below tol within the length cap");
    }
    extend(Ln);
    const RiemannPoint cur = lft(T.adjugate(), RiemannPoint(iu));
    const double d = chordal(cur, prev);
    if (trace) trace->push_back({Ln, cur, d});
    if (d < tol) return cur;
    prev = cur;
    L = Ln;
  }
}

}  // namespace detail
}  // namespace dircan
