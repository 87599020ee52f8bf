#pragma once

#include <cmath>
#include <complex>
#include <ostream>

#include "dircan/errors.hpp"

namespace dircan {

using cplx = std::complex<double>;

inline constexpr cplx iu{0.0, 1.0};

// ---------------------------------------------------------------------------
// Real 2x2 matrix [[a, b], [c, d]].
// ---------------------------------------------------------------------------
struct Mat2 {
  double a = 0, b = 0, c = 0, d = 0;

  static constexpr Mat2 identity() { return {1, 0, 0, 1}; }
  static constexpr Mat2 zero() { return {}; }
  // J = [[0, -1], [1, 0]], the standard symplectic unit.
  static constexpr Mat2 J() { return {0, -1, 1, 0}; }
  static Mat2 rotation(double beta) {
    const double cb = std::cos(beta), sb = std::sin(beta);
    return {cb, -sb, sb, cb};
  }
  // Symmetric matrix [[xx, xy], [xy, yy]].
  static constexpr Mat2 symmetric(double xx, double xy, double yy) {
    return {xx, xy, xy, yy};
  }
  // Projection onto (cos a, sin a)^t.
  static Mat2 projection(double alpha) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    return {ca * ca, ca * sa, ca * sa, sa * sa};
  }

  constexpr double det() const { return a * d - b * c; }
  constexpr double trace() const { return a + d; }
  constexpr Mat2 transpose() const { return {a, c, b, d}; }
  constexpr Mat2 adjugate() const { return {d, -b, -c, a}; }

  double norm_max() const {
    return std::max(std::max(std::abs(a), std::abs(b)),
                    std::max(std::abs(c), std::abs(d)));
  }
  double frob2() const { return a * a + b * b + c * c + d * d; }

  bool is_symmetric(double tol = 1e-12) const {
    return std::abs(b - c) <= tol * (1.0 + norm_max());
  }

  constexpr Mat2 operator+(const Mat2& o) const {
    return {a + o.a, b + o.b, c + o.c, d + o.d};
  }
  constexpr Mat2 operator-(const Mat2& o) const {
    return {a - o.a, b - o.b, c - o.c, d - o.d};
  }
  constexpr Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }
  constexpr Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
  constexpr Mat2 operator/(double s) const { return {a / s, b / s, c / s, d / s}; }
  constexpr Mat2 operator-() const { return {-a, -b, -c, -d}; }

  Mat2 inverse() const {
    const double dt = det();
    if (dt == 0.0) throw singular_h("Mat2::inverse: singular matrix");
    return adjugate() / dt;
  }
};

inline constexpr Mat2 operator*(double s, const Mat2& m) { return m * s; }
// m + s means m + s*I throughout (scalar matrices).
inline constexpr Mat2 operator+(const Mat2& m, double s) {
  return {m.a + s, m.b, m.c, m.d + s};
}

inline std::ostream& operator<<(std::ostream& os, const Mat2& m) {
  return os << "[[" << m.a << ", " << m.b << "], [" << m.c << ", " << m.d << "]]";
}

// Largest singular value, from the 2x2 closed form.
inline double op_norm(const Mat2& m) {
  const double f = m.frob2();
  const double dt = m.det();
  const double disc = std::max(0.0, f * f - 4.0 * dt * dt);
  return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

// Symmetric square root of a positive-definite symmetric matrix:
// sqrt(H) = (H + sqrt(det H) I) / sqrt(tr H + 2 sqrt(det H)).
inline Mat2 sym_sqrt(const Mat2& h, double tol = 1e-14) {
  const double dt = h.det();
  if (!(dt > tol) || !(h.trace() > 0))
    throw singular_h("sym_sqrt: matrix not positive definite");
  const double s = std::sqrt(dt);
  const double t = std::sqrt(h.trace() + 2.0 * s);
  return (h + s) / t;
}

inline Mat2 sym_inv_sqrt(const Mat2& h, double tol = 1e-14) {
  return sym_sqrt(h, tol).inverse();
}

// Smallest eigenvalue of a symmetric matrix.
inline double sym_eig_min(const Mat2& h) {
  const double m = 0.5 * h.trace();
  const double disc = std::sqrt(std::max(0.0, m * m - h.det()));
  return m - disc;
}

// ---------------------------------------------------------------------------
// Complex 2x2 matrix [[a, b], [c, d]].
// ---------------------------------------------------------------------------
struct CMat2 {
  cplx a = 0, b = 0, c = 0, d = 0;

  static CMat2 identity() { return {1, 0, 0, 1}; }
  static CMat2 from(const Mat2& m) { return {m.a, m.b, m.c, m.d}; }

  cplx det() const { return a * d - b * c; }
  cplx trace() const { return a + d; }
  CMat2 adjugate() const { return {d, -b, -c, a}; }
  CMat2 transpose() const { return {a, c, b, d}; }

  double norm_max() const {
    return std::max(std::max(std::abs(a), std::abs(b)),
                    std::max(std::abs(c), std::abs(d)));
  }

  CMat2 operator+(const CMat2& o) const {
    return {a + o.a, b + o.b, c + o.c, d + o.d};
  }
  CMat2 operator-(const CMat2& o) const {
    return {a - o.a, b - o.b, c - o.c, d - o.d};
  }
  CMat2 operator*(const CMat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }
  CMat2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
  CMat2 operator/(cplx s) const { return {a / s, b / s, c / s, d / s}; }
};

inline CMat2 operator*(cplx s, const CMat2& m) { return m * s; }
inline CMat2 operator*(double s, const CMat2& m) { return m * cplx(s); }

inline CMat2 commutator(const CMat2& x, const CMat2& y) {
  return x * y - y * x;
}

// sinh(mu)/mu, stable near mu = 0.
inline cplx sinhc(cplx mu) {
  if (std::abs(mu) < 1e-4) {
    const cplx m2 = mu * mu;
    return 1.0 + m2 / 6.0 + m2 * m2 / 120.0;
  }
  return std::sinh(mu) / mu;
}

// Matrix exponential of a 2x2 matrix via the trace split
// exp(M) = e^{tau} (cosh(mu) I + sinhc(mu) M0),  M0 = M - tau I,
// mu^2 = -det M0.  Exact up to scalar special functions; for tau = 0 the
// determinant of the result is exactly cosh^2 - mu^2 sinhc^2 = 1.
inline CMat2 expm(const CMat2& m) {
  const cplx tau = 0.5 * m.trace();
  CMat2 m0 = m;
  m0.a -= tau;
  m0.d -= tau;
  const cplx mu = std::sqrt(-m0.det());
  const cplx ch = std::cosh(mu), sc = sinhc(mu);
  CMat2 r{ch + sc * m0.a, sc * m0.b, sc * m0.c, ch + sc * m0.d};
  if (tau != 0.0) r = r * std::exp(tau);
  return r;
}

}  // namespace dircan
