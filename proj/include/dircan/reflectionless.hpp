#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dircan/dirac.hpp"
#include "dircan/herglotz.hpp"

namespace dircan {

// ---------------------------------------------------------------------------
// F functions: the single Herglotz function F = M o phi packaging both half
// line m functions of a system reflectionless on U = R \ [-1,1].  Backed
// either by an analytic representation (atomic Herglotz data or a wrapped
// holomorphic map) or by a potential handle evaluated through m_+/m_- and
// the chart.
// ---------------------------------------------------------------------------
class FFunction {
 public:
  static FFunction from_rep(HerglotzRep rep);
  static FFunction from_potential(DiracPotential w, double m_tol = 1e-9);
  // Analytic path without atomic data (e.g. a Moebius transform of another F).
  static FFunction wrapped(std::function<cplx(cplx)> f);

  bool has_rep() const { return rep_.has_value(); }
  const HerglotzRep& rep() const;
  bool has_potential() const { return pot_.has_value(); }
  const DiracPotential& potential() const;
  double m_tol() const { return m_tol_; }

  // F(lambda) for Im lambda > 0.  On the potential path |lambda| = 1 is the
  // seam and must be approached one-sided; lambda == i is evaluated by
  // extrapolation along the imaginary axis.
  cplx eval(cplx lambda) const;
  cplx value_at_i() const;

 private:
  std::optional<HerglotzRep> rep_;
  std::function<cplx(cplx)> fn_;
  std::optional<DiracPotential> pot_;
  double m_tol_ = 1e-9;
};

// The continued function M on C_inf \ [-1,1]:
//   M(z) = F(phi^{-1}(z)) on the upper-half-plane branch of the chart.
// Analytic-path F only (the potential path is defined off the real axis by
// m_+ above and -conj m_- below).
RiemannPoint M_from_F(const FFunction& f, const RiemannPoint& z);

// m pair of the unique reflectionless system with F function F:
//   m_+(z) = F(phi^{-1}(z)),  m_-(z) = -conj F(phi^{-1}(conj z)).
m_pair m_pair_from_F(const FFunction& f, cplx z);

// F through the potential path: m_+(phi(lambda)) inside the unit circle,
// -conj m_-(conj phi(lambda)) outside.  For genuinely reflectionless W the
// two branches continue each other across the seam.
cplx F_from_potential(const DiracPotential& w, cplx lambda, double tol = 1e-9);

// F(i) through the potential path: m_+(iy) extrapolated along y -> infinity.
cplx F_at_i_from_potential(const DiracPotential& w, double tol = 1e-9);

// ---------------------------------------------------------------------------
// The reflectionless identity m_+(x) = -conj m_-(x) on U, checked through
// boundary values extrapolated from m(x + i y_k).
// ---------------------------------------------------------------------------
struct defect_options {
  std::vector<double> y_seq = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  double m_tol = 1e-10;
};

double reflectionless_defect(const DiracPotential& w,
                             const std::vector<double>& x_points,
                             const defect_options& opt = {});
double reflectionless_defect(const FFunction& f,
                             const std::vector<double>& x_points,
                             const defect_options& opt = {});

// Dirac-class membership gate: true iff |F(i) - i| <= tol.
bool dirac_class_test(const FFunction& f, double tol = 1e-8);

// Convex combination of rotation extreme points: atoms (theta_j, w_j) with
// distinct theta in [0, pi) and weights summing to one give
// F(lambda) = sum w_j R_{theta_j} . lambda, which satisfies F(i) = i.
FFunction convex_combination(
    const std::vector<std::pair<double, double>>& atoms);

// ---------------------------------------------------------------------------
// Sharp bound checks on trace-zero reflectionless potentials.
// ---------------------------------------------------------------------------
struct thm41_point {
  double x;
  double norm2;  // a^2 + b^2
  bool ok;
};
struct thm41_report {
  std::vector<thm41_point> points;
  bool norm_ok;            // a^2 + b^2 <= 1 + tol everywhere
  cplx f_prime_i;          // F'(i) by contour quadrature
  double eq_residual;      // |(b(0) + i a(0)) + F'(i)|
  bool eq_ok;
  bool equality_case;      // norm == 1 to 1e-9 at all samples and W constant
};

// Checks ||W(x)|| = sqrt(a^2+b^2) <= 1 at the sample points and the identity
// b(0) + i a(0) = -F'(i); flags the constant norm-one equality case.
thm41_report thm41_check(const DiracPotential& w,
                         const std::vector<double>& x_points,
                         const FFunction& f, double tol = 1e-6);

struct thm42_result {
  double lhs;
  bool ok;
  bool equality;
};

// lhs = (b^2 - a^2 + b + b')^2 + (2ab + a + a')^2 <= 4, equality only for
// a == 0, b == 1.
thm42_result thm42_check(double a, double b, double a_prime, double b_prime,
                         double tol = 1e-9);

// ---------------------------------------------------------------------------
// Seam diagnostics: one-sided radial limits of the potential-path F at
// |lambda| = 1 by 5-point extrapolation.
// ---------------------------------------------------------------------------
struct seam_row {
  double theta;
  cplx inside;
  cplx outside;
  double mismatch;
};
std::vector<seam_row> seam_probe(const DiracPotential& w,
                                 const std::vector<double>& thetas,
                                 int n_radial = 5, double delta0 = 1e-2,
                                 double m_tol = 1e-10);

}  // namespace dircan
