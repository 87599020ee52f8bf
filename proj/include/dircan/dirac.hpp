#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "dircan/errors.hpp"
#include "dircan/mat2.hpp"
#include "dircan/moebius.hpp"
#include "dircan/ode.hpp"
#include "dircan/pullback.hpp"
#include "dircan/sphere.hpp"

namespace dircan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Dirac potentials: real symmetric 2x2 coefficient functions W(x) of
// J y' + W y = -z y.  A potential carries a gauge tag (which normalized class
// its values satisfy), a representation tag, a domain, and optional
// constant-tail markers used by boundary-value evaluation.
// ---------------------------------------------------------------------------
enum class gauge_tag { trace_zero, offdiag_zero, general };
enum class repr_tag { constant, sampled, taylor_patches, closed_form };

class DiracPotential {
 public:
  DiracPotential() = default;

  static DiracPotential constant(const Mat2& w0);
  // Piecewise linear interpolation between strictly increasing grid nodes.
  static DiracPotential sampled(std::vector<double> grid,
                                std::vector<Mat2> values,
                                gauge_tag gauge = gauge_tag::general);
  static DiracPotential closed_form(std::function<Mat2(double)> f,
                                    double x_lo, double x_hi,
                                    gauge_tag gauge = gauge_tag::general);
  // base + bump(x) on (s0, s1), base elsewhere; keeps constant tails on both
  // sides so boundary values stay computable.
  static DiracPotential bump_perturbed(const Mat2& base, double s0, double s1,
                                       std::function<Mat2(double)> bump);

  Mat2 operator()(double x) const;

  gauge_tag gauge() const { return gauge_; }
  repr_tag repr() const { return repr_; }
  double x_min() const { return xlo_; }
  double x_max() const { return xhi_; }
  bool contains(double x) const { return x >= xlo_ && x <= xhi_; }

  // Kinks of piecewise data (integration steps must not straddle them).
  std::shared_ptr<const std::vector<double>> breakpoints() const {
    return bps_;
  }
  // W(x) == value for x >= first (resp. x <= first).
  std::optional<std::pair<double, Mat2>> right_tail() const { return rtail_; }
  std::optional<std::pair<double, Mat2>> left_tail() const { return ltail_; }

  DiracPotential shifted(double t) const;       // x -> W(t + x)
  DiracPotential reflected() const;             // x -> S W(-x) S, S = diag(1,-1)
  DiracPotential plus_scalar(double a) const;   // W + a I
  DiracPotential rescaled(double g) const;      // x -> g W(g x)

  // trace-zero channels W = [[a, b], [b, -a]].
  double entry_a(double x) const { return (*this)(x).a; }
  double entry_b(double x) const { return (*this)(x).b; }
  // off-diagonal-zero channels W = [[0, q], [q, -2p]].
  double entry_q(double x) const { return (*this)(x).b; }
  double entry_p(double x) const { return -0.5 * (*this)(x).d; }

  // Used by the reconstruction: assemble from Taylor patches of g1 = q + ip.
  struct patch {
    double t0;                    // left end; valid on [t0, t0 + dt]
    std::vector<cplx> g1;        // g1(x) = sum_N g1[N] (x - t0)^N
    double alpha0;               // int_0^{t0} p
  };
  static DiracPotential offdiag_from_patches(std::vector<patch> patches,
                                             double dt);
  static DiracPotential trace_zero_from_patches(std::vector<patch> patches,
                                                double dt);
  const std::vector<patch>* patches() const {
    return patches_ ? patches_.get() : nullptr;
  }

  // Builder-style copies used when a derived potential provably satisfies a
  // stronger invariant than the generic constructor can see.
  DiracPotential retagged(gauge_tag g) const;
  DiracPotential with_tails(std::optional<std::pair<double, Mat2>> right,
                            std::optional<std::pair<double, Mat2>> left) const;
  DiracPotential with_breakpoints(
      std::shared_ptr<const std::vector<double>> bps) const;

 private:
  gauge_tag gauge_ = gauge_tag::general;
  repr_tag repr_ = repr_tag::constant;
  double xlo_ = -kInf, xhi_ = kInf;
  std::function<Mat2(double)> eval_;
  std::shared_ptr<const std::vector<double>> bps_;
  std::optional<std::pair<double, Mat2>> rtail_, ltail_;
  std::shared_ptr<const std::vector<patch>> patches_;
  double patch_dt_ = 0.0;
};

// The constant trace-zero extreme potentials of norm one:
// extreme_potential(theta) = R_theta [[0,-1],[-1,0]] R_theta^t
//                          = [[sin 2theta, -cos 2theta], [-cos 2theta, -sin 2theta]];
// its F function is R_theta . lambda.
DiracPotential extreme_potential(double theta);
// The same family parametrized as W_beta = [[sin b, cos b], [cos b, -sin b]].
DiracPotential wbeta_potential(double beta);

// ---------------------------------------------------------------------------
// Gauge group elements (alpha, t): an absolutely continuous angle function
// alpha (values mod pi) and a shift t.  Composition follows
// (alpha, s)(beta, t) = (alpha + s.beta, s + t) with (s.beta)(x) = beta(s+x).
// ---------------------------------------------------------------------------
class GaugeElement {
 public:
  GaugeElement();  // identity

  static GaugeElement closed_form(std::function<double(double)> alpha,
                                  std::function<double(double)> alpha_prime,
                                  double shift = 0.0);
  static GaugeElement constant_angle(double theta, double shift = 0.0);
  static GaugeElement pure_shift(double t);
  // Piecewise-linear samples; derivative by central differences, one-sided at
  // the ends.  Throws non_differentiable_alpha for unusable data.
  static GaugeElement sampled(std::vector<double> grid,
                              std::vector<double> values, double shift = 0.0);
  // Cubic Hermite data (value and derivative at nodes); alpha' is the exact
  // derivative of the interpolant.
  static GaugeElement hermite(std::vector<double> grid,
                              std::vector<double> values,
                              std::vector<double> derivs, double shift = 0.0);

  double alpha(double x) const { return a_(x); }
  double alpha_prime(double x) const { return ap_(x); }
  double shift() const { return t_; }
  bool is_constant_angle() const { return const_angle_; }
  bool in_A0(double tol = 1e-12) const;

  double x_min() const { return xlo_; }
  double x_max() const { return xhi_; }
  std::shared_ptr<const std::vector<double>> breakpoints() const {
    return bps_;
  }

  GaugeElement compose(const GaugeElement& other) const;

 private:
  std::function<double(double)> a_, ap_;
  double t_ = 0.0;
  bool const_angle_ = true;
  double xlo_ = -kInf, xhi_ = kInf;
  std::shared_ptr<const std::vector<double>> bps_;
};

// ---------------------------------------------------------------------------
// Transfer matrices: T solves J T' + W T = -z T, T(0) = 1; det T = 1.
// ---------------------------------------------------------------------------
struct TransferMatrix {
  CMat2 T;
  double x = 0.0;
  cplx z = 0.0;
};

TransferMatrix transfer_matrix(const DiracPotential& w, double x, cplx z,
                               double tol = 1e-10);

// Closed-form transfer matrix of a constant potential, exp(x J (W0 + z)).
CMat2 constant_transfer(const Mat2& w0, double x, cplx z);

// ---------------------------------------------------------------------------
// Weyl m functions.
// ---------------------------------------------------------------------------

// m_+ by the limit-point algorithm: seed i at x = L, pull back through
// T(L; z)^{-1} as a Moebius map, double L (starting from 4 / Im z) until
// successive values differ by less than tol in the chordal metric.
cplx m_plus(const DiracPotential& w, cplx z, double tol = 1e-9,
            std::vector<m_stage>* trace = nullptr);

// Mirror on the left half line (integrates toward -L).
cplx m_minus(const DiracPotential& w, cplx z, double tol = 1e-9);

// Closed-form constant-coefficient m pair; the oracle for m_plus/m_minus.
struct m_pair {
  cplx plus;
  cplx minus;
};
m_pair constant_m(const Mat2& w0, cplx z);

namespace detail {
// Boundary-value-capable evaluator: closed form for constant potentials,
// transfer to the constant tail when one exists, pull-back otherwise.
cplx m_plus_auto(const DiracPotential& w, cplx z, double tol = 1e-9);
cplx m_minus_auto(const DiracPotential& w, cplx z, double tol = 1e-9);
}  // namespace detail

// ---------------------------------------------------------------------------
// Group actions on potentials.
// ---------------------------------------------------------------------------

// (alpha . W)(x) = R_{alpha(x)} W(x) R_{alpha(x)}^t + alpha'(x) I; requires a
// pure gauge element (shift 0).  Preserves m_+ when alpha(0) = 0; for
// alpha(0) = theta it rotates the m functions by R_theta.
DiracPotential alpha_action(const GaugeElement& g, const DiracPotential& w);

// Full semidirect action ((alpha, t) . W)(x) = R_{alpha(x)} W(t+x) R^t + alpha'(x) I.
DiracPotential group_action(const GaugeElement& g, const DiracPotential& w);

// Unique alpha in A0 with (alpha . W)_{11} == 0: solves
// alpha' + W11 cos^2 a + W22 sin^2 a - 2 W12 sin a cos a = 0, alpha(0) = 0.
// Returns the gauge element and the transformed potential, both usable on
// [x_lo, x_hi].
struct offdiag_normalization {
  GaugeElement alpha;
  DiracPotential w;
};
offdiag_normalization normalize_offdiag(const DiracPotential& w, double x_lo,
                                        double x_hi, double tol = 1e-12);

// If the z = 0 transfer matrices satisfy T2 = R_alpha T1 on the grid, returns
// the unwrapped angle with alpha(0) = 0; otherwise NotEquivalent (nullopt).
std::optional<GaugeElement> gauge_between(const DiracPotential& w1,
                                          const DiracPotential& w2,
                                          const std::vector<double>& grid,
                                          double tol = 1e-8);

// x -> g (W(g x) + a I): shifts the spectral parameter by a and rescales it
// by g, so m(z; result) = m(z/g + a; W).
DiracPotential shift_scale(const DiracPotential& w, double a, double g);

}  // namespace dircan
