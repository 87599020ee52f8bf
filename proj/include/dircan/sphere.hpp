#pragma once

#include <cmath>
#include <ostream>

#include "dircan/errors.hpp"
#include "dircan/mat2.hpp"

namespace dircan {

// A point of the Riemann sphere: a finite complex value or the point at
// infinity.  A vector (f1, f2)^t is identified with f1/f2, so 1/0 limits are
// part of the model, not an error.
class RiemannPoint {
 public:
  RiemannPoint() : v_(0.0), inf_(false) {}
  RiemannPoint(cplx v) : v_(v), inf_(false) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      v_ = 0.0;
      inf_ = true;
    }
  }
  RiemannPoint(double v) : RiemannPoint(cplx(v, 0.0)) {}

  static RiemannPoint infinity() {
    RiemannPoint p;
    p.inf_ = true;
    return p;
  }
  // Projective point f1/f2; (0,0) is rejected.
  static RiemannPoint ratio(cplx f1, cplx f2) {
    if (f2 == 0.0) {
      if (f1 == 0.0) throw error("RiemannPoint::ratio: 0/0");
      return infinity();
    }
    return RiemannPoint(f1 / f2);
  }

  bool is_infinity() const { return inf_; }
  bool is_finite() const { return !inf_; }
  cplx value() const {
    if (inf_) throw error("RiemannPoint::value: point at infinity");
    return v_;
  }
  // Finite value or the given fallback.
  cplx value_or(cplx fb) const { return inf_ ? fb : v_; }

 private:
  cplx v_;
  bool inf_;
};

inline std::ostream& operator<<(std::ostream& os, const RiemannPoint& p) {
  if (p.is_infinity()) return os << "inf";
  return os << p.value();
}

// Spherical (chordal) metric 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)) with the
// standard limits at infinity.  Range [0, 2].
inline double chordal(const RiemannPoint& p, const RiemannPoint& q) {
  if (p.is_infinity() && q.is_infinity()) return 0.0;
  if (p.is_infinity()) return 2.0 / std::hypot(1.0, std::abs(q.value()));
  if (q.is_infinity()) return 2.0 / std::hypot(1.0, std::abs(p.value()));
  const cplx z = p.value(), w = q.value();
  return 2.0 * std::abs(z - w) /
         (std::hypot(1.0, std::abs(z)) * std::hypot(1.0, std::abs(w)));
}

inline double chordal(cplx z, cplx w) {
  return chordal(RiemannPoint(z), RiemannPoint(w));
}

// Linear fractional action of a complex 2x2 matrix on the sphere,
// (a b; c d) . z = (az + b)/(cz + d).  For invertible matrices 0/0 cannot
// occur.
inline RiemannPoint lft(const CMat2& m, const RiemannPoint& z) {
  if (z.is_infinity()) {
    if (m.c == 0.0) return m.a == 0.0 ? RiemannPoint(m.b / m.d)
                                      : RiemannPoint::infinity();
    return RiemannPoint(m.a / m.c);
  }
  const cplx num = m.a * z.value() + m.b;
  const cplx den = m.c * z.value() + m.d;
  if (den == 0.0) return RiemannPoint::infinity();
  return RiemannPoint(num / den);
}

inline RiemannPoint lft(const CMat2& m, cplx z) { return lft(m, RiemannPoint(z)); }

}  // namespace dircan
