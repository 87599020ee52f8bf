#pragma once

#include <vector>

#include "dircan/reflectionless.hpp"
#include "dircan/series.hpp"

namespace dircan {

// ---------------------------------------------------------------------------
// Inverse reconstruction of the Dirac potential from an F function by Taylor
// marching: at each accepted basepoint t the coefficients g_n(t) are known,
// the derivative cascade fills h_n(N; t) = g_n^{(N)}(t)/N!, the potential is
// read off from g_1 = q + i p, and all coefficients advance by truncated
// Taylor sums over a step chosen from the majorant table.
// ---------------------------------------------------------------------------

// Step-size parameters from the closed-form majorant B_1(N) = (3/r)(15/r)^N:
// C = 3/r, M = 15/r, dt = rho / M.
struct step_parameters {
  double C;
  double M;
  double dt;
};
step_parameters taylor_step_parameters(double r, double rho);

// Geometric tail bound sum_{N > N_max} C (M dt)^N = C rho^{N_max+1}/(1-rho).
double taylor_tail_bound(double r, double rho, int N_max);

struct march_options {
  int n_max = 25;
  int N_max = 24;
  double rho = 0.5;
  double r = 1.0;
  // Quadrature re-seed cadence; high coefficient indices (n > reseed_keep)
  // are refreshed from a forward solve of the already-built segment.  Past
  // reseed_horizon the transport conditioning e^{2 Re mu t} makes the
  // quadrature noisier than the march and re-seeding stops.
  int reseed_every = 8;
  int reseed_keep = 8;
  double reseed_horizon = 3.0;
  double envelope_slack = 0.10;  // tolerated excess over |g_n| <= (3/r)^n
  double m_tol = 1e-10;
  double gate_tol = 1e-7;  // |F(i) - i| gate
};

struct march_sample {
  double x;
  double p, q;              // off-diagonal-zero gauge data
  double a, b;              // trace-zero gauge data
  double alpha;             // int_0^x p
  double p_prime, q_prime;  // from the first cascade column
};

struct march_report {
  int steps = 0;
  int reseeds = 0;
  double dt = 0.0;
  double per_step_tail = 0.0;
  double tail_budget = 0.0;  // steps * per_step_tail
  double max_envelope_ratio = 0.0;
};

struct MarchResult {
  std::vector<march_sample> samples;
  DiracPotential potential;             // off-diagonal-zero Taylor patches
  DiracPotential potential_trace_zero;  // same data in the trace-zero gauge
  std::vector<cplx> final_state;        // g_n at x_end
  double x_end = 0.0;
  march_report report;
};

// Marches from 0 to at least x_max (whole steps).  Throws not_dirac_class if
// |F(i) - i| exceeds the gate and bound_violation if a coefficient escapes
// its envelope (invalid input or accumulated error).
MarchResult reconstruct_potential(const FFunction& f, double x_max,
                                  const march_options& opt = {});

// Max chordal residual between the potential-path F (right half line, m_+
// only) and the reference F at the sample points; lambda samples must lie in
// the open upper unit semidisk away from the seam.
double forward_validate(const DiracPotential& w, const FFunction& f,
                        const std::vector<cplx>& lambdas, double m_tol = 1e-9);

}  // namespace dircan
