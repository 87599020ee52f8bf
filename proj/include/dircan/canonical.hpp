#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dircan/dirac.hpp"
#include "dircan/herglotz.hpp"
#include "dircan/moebius.hpp"

namespace dircan {

// ---------------------------------------------------------------------------
// Canonical systems J u' = -z H(x) u with H(x) real symmetric, positive
// semidefinite.  Degenerate systems H == P_alpha (the projection onto
// (cos a, sin a)^t) are represented explicitly by their angle, never as a
// numeric limit.
// ---------------------------------------------------------------------------
enum class norm_tag { det_one, trace_one };

class CanonicalSystem {
 public:
  static CanonicalSystem constant(const Mat2& h0, norm_tag norm);
  static CanonicalSystem sampled(std::vector<double> grid,
                                 std::vector<Mat2> values, norm_tag norm);
  // Samples with exact derivatives (e.g. from an integrated Dirac transfer
  // matrix); H'(x) then avoids finite differencing entirely.
  static CanonicalSystem sampled_with_derivative(std::vector<double> grid,
                                                 std::vector<Mat2> values,
                                                 std::vector<Mat2> derivs,
                                                 norm_tag norm);
  static CanonicalSystem degenerate(double alpha);

  Mat2 H(double x) const;
  // Exact samples when available, otherwise central differences on the grid
  // (one-sided at the ends).
  Mat2 Hprime(double x) const;

  norm_tag normalization() const { return norm_; }
  bool is_degenerate() const { return degenerate_.has_value(); }
  double degenerate_angle() const;
  bool has_exact_derivative() const { return !dvals_.empty(); }

  bool is_constant() const { return grid_.empty() && !degenerate_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<Mat2>& values() const { return vals_; }
  double x_min() const;
  double x_max() const;

 private:
  norm_tag norm_ = norm_tag::det_one;
  std::optional<double> degenerate_;
  Mat2 h0_ = Mat2::identity();
  std::vector<double> grid_;
  std::vector<Mat2> vals_, dvals_, fd_;
};

// ---------------------------------------------------------------------------
// The Dirac <-> canonical correspondence.
// ---------------------------------------------------------------------------

// H(x) = T^t(x) T(x) with T the z = 0 transfer matrix of W; H is absolutely
// continuous, H(0) = 1, det H = 1, and shares the m function of W.  Exact
// derivatives H' = T^t (J W - W J) T are stored alongside.
CanonicalSystem dirac_to_canonical(const DiracPotential& w,
                                   const std::vector<double>& grid,
                                   double tol = 1e-10);

// Inverse direction through the triangular factorization
//   T = [[R1, R2 cos th], [0, R2 sin th]],  R1 R2 sin th = 1,
// which yields the unique W11 == 0 representative W = -J T' T^{-1}:
//   q = -H11'/(2 H11),  p = (H12' - H11' H12 / H11) / 2.
DiracPotential canonical_to_dirac(const CanonicalSystem& h, double tol = 1e-9);

// (A . H)(x) = A^{-1 t} H(x) A^{-1}; transports m functions by
// +-m_+-(z; A.H) = A . (+-m_+-(z; H)).
CanonicalSystem psl2_action(const MoebiusMap& a, const CanonicalSystem& h);

// Reparametrize a trace-normalized system with det H > 0 to det H == 1:
// xtilde = int sqrt(det H), Htilde = H / sqrt(det H).  m functions unchanged.
CanonicalSystem det_normalize(const CanonicalSystem& h, double tol = 1e-12);

// K(x) = H^{-1/2}(x) H'(x) H^{-1/2}(x) for a det-normalized system.
// tr K = 0 (up to tolerance) and the norm is both the largest singular value
// and |det H'(x)|^{1/2}; both are returned.
struct k_matrix_result {
  Mat2 K;
  double norm_singular;
  double norm_det;
  double trace;
};
k_matrix_result k_matrix(const CanonicalSystem& h, double x,
                         double tol = 1e-8);

// Unique element of the dilation/translation subgroup G moving a system with
// F(i) = a0 + i b0, b0 > 0, into the Dirac class: g . m = m / b0 - a0 / b0.
struct dirac_class_normalization {
  MoebiusMap g;
  double c2;  // multiplier 1 / b0
  double a;   // added constant -a0 / b0
};
dirac_class_normalization normalize_to_dirac_class(cplx f_at_i,
                                                   double tol = 1e-12);
// Same, applied to an atomic representation: returns g and g . F.
std::pair<dirac_class_normalization, HerglotzRep> normalize_to_dirac_class(
    const HerglotzRep& rep, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Canonical transfer matrix and m function (pull-back, as for Dirac).
// ---------------------------------------------------------------------------
CMat2 canonical_transfer(const CanonicalSystem& h, double x, cplx z,
                         double tol = 1e-10);

RiemannPoint m_plus_canonical(const CanonicalSystem& h, cplx z,
                              double tol = 1e-9);

}  // namespace dircan
