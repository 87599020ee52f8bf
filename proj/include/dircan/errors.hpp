#pragma once

#include <stdexcept>
#include <string>

namespace dircan {

// Base class for every failure this library raises on purpose. Callers that
// want to distinguish usage mistakes from numerical breakdowns can catch the
// derived types below.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input lies on the slit [-1,1] where the conformal chart is not defined.
struct slit_input : error { using error::error; };

// Spectral parameter must have positive imaginary part.
struct not_upper_half_plane : error { using error::error; };

// A pure-measure operation was handed a representation with a nonzero shift.
struct nonzero_shift : error { using error::error; };

// Herglotz data is not normalized (mass != 1 or shift != 0, F(i) != i, or
// an improperly normalized coefficient matrix).
struct not_normalized : error { using error::error; };

// Atom weights are not positive / do not sum to one.
struct bad_weights : error { using error::error; };

// Two sampled functions were given on different grids.
struct grid_mismatch : error { using error::error; };

// Step control could not meet the requested tolerance.
struct integration_failure : error { using error::error; };

// The computation needs the coefficient function outside its domain.
struct domain_exceeded : error { using error::error; };

// Weyl-disk pull-back did not contract below tolerance before the cap.
struct no_convergence : error { using error::error; };

// A gauge angle function without a usable derivative.
struct non_differentiable_alpha : error { using error::error; };

// Grid too coarse to unwrap a rotation angle without branch ambiguity.
struct grid_too_coarse : error { using error::error; };

// Constant-coefficient eigen-solve at a branch point of the dispersion
// relation; perturb the spectral parameter.
struct degenerate_eigenbasis : error { using error::error; };

// Coefficient sequence shorter than the recursion requires.
struct insufficient_coefficients : error { using error::error; };

// Coefficient table too shallow: the cascade needs n_max >= N_max + 1.
struct insufficient_depth : error { using error::error; };

// Contour quadrature radius encloses a singularity (non-decaying residuals).
struct radius_too_large : error { using error::error; };

// The F function fails the F(i) = i membership gate.
struct not_dirac_class : error { using error::error; };

// A marched coefficient escaped its analytic envelope |g_n| <= (3/r)^n.
struct bound_violation : error { using error::error; };

// Degenerate canonical system (H in the projection class, det H = 0).
struct degenerate_system : error { using error::error; };

// H(x) numerically singular where a positive matrix is required.
struct singular_h : error { using error::error; };

// Boundary-value extrapolation saw non-monotone residuals.
struct extrapolation_unstable : error { using error::error; };

}  // namespace dircan
