#pragma once

#include <cmath>

#include "dircan/errors.hpp"
#include "dircan/mat2.hpp"
#include "dircan/sphere.hpp"

namespace dircan {

// An element of PSL(2,R): a real 2x2 matrix with positive determinant acting
// on the Riemann sphere by (a b; c d) . z = (az + b)/(cz + d).  Stored
// normalized to det = 1; (A, -A) are identified when compared.
class MoebiusMap {
 public:
  MoebiusMap() : m_(Mat2::identity()) {}
  explicit MoebiusMap(const Mat2& m) : m_(m) {
    const double dt = m_.det();
    if (!(dt > 0.0))
      throw error("MoebiusMap: determinant must be positive");
    const double s = std::sqrt(dt);
    m_ = m_ / s;
  }
  MoebiusMap(double a, double b, double c, double d)
      : MoebiusMap(Mat2{a, b, c, d}) {}

  static MoebiusMap identity() { return MoebiusMap(); }
  // R_beta = (cos b, -sin b; sin b, cos b); fixes i for every beta.
  static MoebiusMap rotation(double beta) {
    return MoebiusMap(Mat2::rotation(beta));
  }
  // Element of the dilation/translation subgroup G: z -> c^2 z + a.
  static MoebiusMap scale_shift(double c, double a) {
    if (!(c > 0.0)) throw error("MoebiusMap::scale_shift: c must be > 0");
    return MoebiusMap(Mat2{c, a / c, 0.0, 1.0 / c});
  }

  const Mat2& matrix() const { return m_; }
  MoebiusMap inverse() const { return MoebiusMap(m_.adjugate()); }
  MoebiusMap operator*(const MoebiusMap& o) const {
    return MoebiusMap(m_ * o.m_);
  }

  RiemannPoint operator()(const RiemannPoint& z) const {
    return lft(CMat2::from(m_), z);
  }
  RiemannPoint operator()(cplx z) const { return (*this)(RiemannPoint(z)); }

  // Projective comparison: A == B iff A = +/-B entrywise.
  bool equals(const MoebiusMap& o, double tol = 1e-12) const {
    const double dplus = (m_ - o.m_).norm_max();
    const double dminus = (m_ + o.m_).norm_max();
    return std::min(dplus, dminus) <= tol;
  }

 private:
  Mat2 m_;
};

inline RiemannPoint moebius_apply(const MoebiusMap& m, const RiemannPoint& z) {
  return m(z);
}

inline MoebiusMap rotation(double beta) { return MoebiusMap::rotation(beta); }

}  // namespace dircan
