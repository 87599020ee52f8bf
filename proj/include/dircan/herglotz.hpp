#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dircan/errors.hpp"
#include "dircan/moebius.hpp"
#include "dircan/sphere.hpp"

namespace dircan {

// ---------------------------------------------------------------------------
// The conformal chart phi(lambda) = 2 lambda / (lambda^2 + 1).
//
// It maps the open upper unit semidisk onto the upper half plane, the upper
// semicircle onto U u {inf} with U = R \ [-1,1], and the semidisk exterior in
// the upper half plane onto the lower half plane.  phi(i) = inf, and phi is
// invariant under lambda -> 1/lambda.
// ---------------------------------------------------------------------------
RiemannPoint phi(const RiemannPoint& lambda);
inline RiemannPoint phi(cplx lambda) { return phi(RiemannPoint(lambda)); }

enum class phi_branch { semidisk, exterior };

// Inverts phi by solving lambda^2 - (2/z) lambda + 1 = 0.  The semidisk
// branch is the root with |lambda| < 1 (ties at |lambda| = 1 resolve to the
// upper arc); the exterior branch is its partner 1/lambda, so that
// phi(phi_inverse(z, b)) = z on either branch.  Throws slit_input for z
// within slit_tol of [-1, 1].
cplx phi_inverse(const RiemannPoint& z, phi_branch branch,
                 double slit_tol = 1e-12);
inline cplx phi_inverse(cplx z, phi_branch branch, double slit_tol = 1e-12) {
  return phi_inverse(RiemannPoint(z), branch, slit_tol);
}

// The preimage of z under phi lying in the closed upper half plane; this is
// the branch on which a Herglotz F represents the continued function
// M(z) = F(phi^{-1}(z)) on all of C_inf \ [-1,1].
cplx phi_inverse_upper(const RiemannPoint& z, double slit_tol = 1e-12);

// Coefficients of phi(i+h) = 1/h - sum_{n>=0} (i/2)^{n+1} h^n:
// n = -1 returns 1 (the 1/h term), n >= 0 returns -(i/2)^{n+1}.
cplx phi_expansion_coeff(int n);

// ---------------------------------------------------------------------------
// Finitely atomic Herglotz representation
//   F(lambda) = a + sum_j w_j (1 + t_j lambda)/(t_j - lambda),
// with locations t_j on the extended real line (the kernel at t = inf is
// lambda itself) and weights w_j > 0.
// ---------------------------------------------------------------------------
struct HerglotzAtom {
  RiemannPoint t;  // location on R u {inf}
  double w;        // weight, > 0
};

class HerglotzRep {
 public:
  HerglotzRep() = default;
  HerglotzRep(double shift, std::vector<HerglotzAtom> atoms);

  double shift() const { return shift_; }
  const std::vector<HerglotzAtom>& atoms() const { return atoms_; }
  double total_mass() const;
  bool normalized(double tol = 1e-12) const;  // shift = 0, mass = 1
  cplx value_at_i() const { return cplx(shift_, total_mass()); }

  HerglotzRep scaled_shifted(double c2, double a) const;  // F -> c2 F + a

 private:
  double shift_ = 0.0;
  std::vector<HerglotzAtom> atoms_;
};

// Evaluate F(lambda) for Im lambda > 0.
cplx herglotz_eval(const HerglotzRep& rep, cplx lambda);

// Rotation form of a pure-measure representation (shift = 0): each atom
// (t, w) becomes (theta(t), w) with R_theta . lambda = (1+t lambda)/(t-lambda)
// in PSO(2); t = inf maps to theta = 0 and theta(t) = -acot(t) mod pi.
std::vector<std::pair<double, double>> rotation_form(const HerglotzRep& rep);

// Atom location realizing the rotation kernel R_theta . lambda, i.e. the
// inverse of the theta(t) map above: t = -cot(theta), with t = inf at 0.
RiemannPoint rotation_atom_location(double theta);

// Taylor coefficients f_1..f_N of F at i for a normalized representation
// (mass 1, shift 0, so F(i) = i):  f_n = sum_j w_j (1+t^2)/(t-i)^{n+1}.
// |f_n| <= 1 for all n; |f_1| = 1 iff a single atom; |f_n| = 1 for n >= 2
// iff the measure is the point mass at 0.
std::vector<cplx> taylor_at_i(const HerglotzRep& rep, int N);

// Disk-coefficient transform b_N = sum_{n=1}^{N} (2i)^n a_n binom(N-1, n-1),
// mapping half-plane Taylor data (|a_n| <= 1) to unit-disk Taylor data with
// the uniform bound |b_N| <= 2 * 3^{N-1}.
cplx disk_coeff_transform(const std::vector<cplx>& a_seq, int N);

// ---------------------------------------------------------------------------
// Sampled metric on Herglotz functions: d(F, G) = max over the disk
// |z - 2i| <= 1 of the chordal distance of values.  The maximum is taken on
// a fixed grid of 256 equispaced boundary points (a documented surrogate for
// the supremum).
// ---------------------------------------------------------------------------
inline constexpr int kDistanceGridSize = 256;

std::vector<cplx> distance_grid();  // the 256 boundary points of |z-2i|=1

std::vector<RiemannPoint> sample_on_distance_grid(
    const std::function<RiemannPoint(cplx)>& f);

double herglotz_distance(const std::vector<RiemannPoint>& f_samples,
                         const std::vector<RiemannPoint>& g_samples);

}  // namespace dircan
