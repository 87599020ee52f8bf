#include "dircan/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dircan/quadrature.hpp"

namespace dircan {

step_parameters taylor_step_parameters(double r, double rho) {
  if (!(r > 0.0) || !(rho > 0.0) || !(rho < 1.0))
    throw error("taylor_step_parameters: need r > 0 and rho in (0,1)");
  const double c = 3.0 / r;
  const double m = 15.0 / r;
  return {c, m, rho / m};
}

double taylor_tail_bound(double r, double rho, int N_max) {
  const auto p = taylor_step_parameters(r, rho);
  return p.C * std::pow(rho, N_max + 1) / (1.0 - rho);
}

namespace {

struct dirac_rhs {
  const DiracPotential* w;
  cplx z;
  CMat2 operator()(double x) const {
    const Mat2 m = (*w)(x);
    return CMat2{-m.c, -(m.d + z), m.a + z, m.b};
  }
};

// Fresh coefficients g_n(ts) by transporting M along the reconstructed
// segment: m(ts; z) = T(ts; z) . M(z), sampled on the quadrature circle
// |w| = r/2 and resolved by discrete Cauchy sums.
std::vector<cplx> reseed_coefficients(const FFunction& f,
                                      const DiracPotential& built, double ts,
                                      int n_max, double r) {
  constexpr int nodes = 128;
  const double rq = 0.5 * r;
  auto bps = built.breakpoints();
  integrate_options opt;
  opt.rel_tol = 1e-12;
  opt.breakpoints = bps ? bps.get() : nullptr;

  std::vector<cplx> vals(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.5) / nodes;
    const cplx w = rq * cplx(std::cos(th), std::sin(th));
    const cplx z = -1.0 / w;
    const CMat2 t =
        propagate(dirac_rhs{&built, z}, 0.0, ts, CMat2::identity(), opt);
    const RiemannPoint m = lft(t, M_from_F(f, RiemannPoint(z)));
    if (m.is_infinity())
      throw integration_failure("reseed: transported value hit the pole");
    vals[static_cast<std::size_t>(k)] = m.value() - iu;
  }
  std::vector<cplx> g(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    cplx s = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const double th = 2.0 * std::numbers::pi * (k + 0.5) / nodes;
      s += vals[static_cast<std::size_t>(k)] *
           cplx(std::cos(n * th), -std::sin(n * th));
    }
    g[static_cast<std::size_t>(n - 1)] = s / (nodes * std::pow(rq, n));
  }
  return g;
}

}  // namespace

MarchResult reconstruct_potential(const FFunction& f, double x_max,
                                  const march_options& opt) {
  if (!(x_max > 0.0)) throw error("reconstruct_potential: x_max must be > 0");
  if (opt.n_max < 2 || opt.N_max < 1 || opt.n_max < opt.N_max + 1)
    throw insufficient_depth("reconstruct_potential: need n_max >= N_max + 1");
  if (!dirac_class_test(f, opt.gate_tol))
    throw not_dirac_class("reconstruct_potential: F(i) != i");

  const auto sp = taylor_step_parameters(opt.r, opt.rho);
  const double dt = sp.dt;
  const int steps = static_cast<int>(std::ceil(x_max / dt - 1e-12));

  MarchResult res;
  res.report.dt = dt;
  res.report.per_step_tail = taylor_tail_bound(opt.r, opt.rho, opt.N_max);
  res.report.steps = steps;
  res.report.tail_budget = steps * res.report.per_step_tail;

  std::vector<cplx> g = g_from_F(f, opt.n_max, opt.r).coeffs;
  std::vector<DiracPotential::patch> patches;
  patches.reserve(static_cast<std::size_t>(steps));
  double alpha = 0.0;

  auto envelope_check = [&](const std::vector<cplx>& gs) {
    double env = 1.0, worst = 0.0;
    for (int n = 1; n <= opt.n_max; ++n) {
      env *= 3.0 / opt.r;
      worst = std::max(
          worst, std::abs(gs[static_cast<std::size_t>(n - 1)]) / env);
    }
    res.report.max_envelope_ratio =
        std::max(res.report.max_envelope_ratio, worst);
    if (worst > 1.0 + opt.envelope_slack)
      throw bound_violation(
          "reconstruct_potential: |g_n| escaped the (3/r)^n envelope");
  };
  auto push_sample = [&](double t, const CoeffTable& casc) {
    const cplx g1 = g[0];
    const double q = g1.real(), p = g1.imag();
    const cplx g1p = casc.at(1, 1);  // g_1'(t)/1!
    const double c2 = std::cos(2.0 * alpha), s2 = std::sin(2.0 * alpha);
    res.samples.push_back({t, p, q, p * c2 - q * s2, p * s2 + q * c2, alpha,
                           g1p.imag(), g1p.real()});
  };

  envelope_check(g);
  for (int j = 0; j < steps; ++j) {
    const double t = j * dt;
    if (opt.reseed_every > 0 && j > 0 && j % opt.reseed_every == 0 &&
        t <= opt.reseed_horizon && !patches.empty()) {
      const DiracPotential built =
          DiracPotential::offdiag_from_patches(patches, dt);
      const auto fresh =
          reseed_coefficients(f, built, t, opt.n_max, opt.r);
      for (int n = opt.reseed_keep + 1; n <= opt.n_max; ++n)
        g[static_cast<std::size_t>(n - 1)] =
            fresh[static_cast<std::size_t>(n - 1)];
      ++res.report.reseeds;
      envelope_check(g);
    }

    const CoeffTable casc = derivative_cascade(g, opt.N_max);
    push_sample(t, casc);

    // Record the patch for g_1 on [t, t + dt].
    DiracPotential::patch pc;
    pc.t0 = t;
    pc.alpha0 = alpha;
    const auto& row1 = casc.rows[0];
    pc.g1.assign(row1.begin(), row1.end());
    patches.push_back(std::move(pc));

    // alpha(t + dt) = alpha(t) + int Im g_1 over the patch.
    double da = 0.0;
    for (std::size_t k = row1.size(); k-- > 0;)
      da = da * dt + row1[k].imag() / static_cast<double>(k + 1);
    alpha += da * dt;

    // Advance every coefficient by its truncated Taylor sum.
    std::vector<cplx> next(static_cast<std::size_t>(opt.n_max));
    for (int n = 1; n <= opt.n_max; ++n) {
      const auto& row = casc.rows[static_cast<std::size_t>(n - 1)];
      cplx s = 0.0;
      for (std::size_t k = row.size(); k-- > 0;) s = s * dt + row[k];
      next[static_cast<std::size_t>(n - 1)] = s;
    }
    g = std::move(next);
    envelope_check(g);
  }

  // Final node (no patch beyond it; cascade only for the derivative columns).
  const CoeffTable casc_end = derivative_cascade(g, 1);
  push_sample(steps * dt, casc_end);

  res.x_end = steps * dt;
  res.final_state = g;
  res.potential = DiracPotential::offdiag_from_patches(patches, dt);
  res.potential_trace_zero =
      DiracPotential::trace_zero_from_patches(patches, dt);
  return res;
}

double forward_validate(const DiracPotential& w, const FFunction& f,
                        const std::vector<cplx>& lambdas, double m_tol) {
  if (lambdas.empty()) throw error("forward_validate: no sample points");
  double worst = 0.0;
  for (const cplx lam : lambdas) {
    if (!(lam.imag() > 0.0) || std::abs(lam) >= 1.0 - 1e-6)
      throw error(
          "forward_validate: lambda must lie in the open upper semidisk");
    const cplx z = phi(lam).value();
    const cplx via_potential = m_plus(w, z, m_tol);
    worst = std::max(worst, chordal(via_potential, f.eval(lam)));
  }
  return worst;
}

}  // namespace dircan
