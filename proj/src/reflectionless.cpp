#include "dircan/reflectionless.hpp"

#include <algorithm>
#include <cmath>

#include "dircan/quadrature.hpp"

namespace dircan {

// ---------------------------------------------------------------------------
// FFunction
// ---------------------------------------------------------------------------

FFunction FFunction::from_rep(HerglotzRep rep) {
  FFunction f;
  f.rep_ = std::move(rep);
  return f;
}

FFunction FFunction::from_potential(DiracPotential w, double m_tol) {
  FFunction f;
  f.pot_ = std::move(w);
  f.m_tol_ = m_tol;
  return f;
}

FFunction FFunction::wrapped(std::function<cplx(cplx)> fn) {
  FFunction f;
  f.fn_ = std::move(fn);
  return f;
}

const HerglotzRep& FFunction::rep() const {
  if (!rep_) throw error("FFunction: no atomic representation");
  return *rep_;
}

const DiracPotential& FFunction::potential() const {
  if (!pot_) throw error("FFunction: no potential handle");
  return *pot_;
}

cplx FFunction::eval(cplx lambda) const {
  if (rep_) return herglotz_eval(*rep_, lambda);
  if (fn_) {
    if (!(lambda.imag() > 0.0))
      throw not_upper_half_plane("FFunction::eval: Im lambda must be > 0");
    return fn_(lambda);
  }
  if (pot_) return F_from_potential(*pot_, lambda, m_tol_);
  throw error("FFunction: empty");
}

cplx FFunction::value_at_i() const {
  if (rep_) return rep_->value_at_i();
  if (pot_) return F_at_i_from_potential(*pot_, m_tol_);
  return fn_(cplx(0.0, 1.0));
}

// ---------------------------------------------------------------------------
// Chart plumbing
// ---------------------------------------------------------------------------

RiemannPoint M_from_F(const FFunction& f, const RiemannPoint& z) {
  if (f.has_potential()) {
    if (z.is_infinity())
      return RiemannPoint(F_at_i_from_potential(f.potential(), f.m_tol()));
    const cplx zv = z.value();
    if (zv.imag() > 0.0)
      return RiemannPoint(detail::m_plus_auto(f.potential(), zv, f.m_tol()));
    if (zv.imag() < 0.0)
      return RiemannPoint(-std::conj(
          detail::m_minus_auto(f.potential(), std::conj(zv), f.m_tol())));
    throw error("M_from_F: potential path undefined on the real axis");
  }
  const cplx lam = phi_inverse_upper(z);
  return RiemannPoint(f.eval(lam));
}

m_pair m_pair_from_F(const FFunction& f, cplx z) {
  if (!(z.imag() > 0.0))
    throw not_upper_half_plane("m_pair_from_F: Im z must be > 0");
  const cplx lam_plus = phi_inverse_upper(RiemannPoint(z));
  const cplx lam_minus = phi_inverse_upper(RiemannPoint(std::conj(z)));
  return {f.eval(lam_plus), -std::conj(f.eval(lam_minus))};
}

cplx F_from_potential(const DiracPotential& w, cplx lambda, double tol) {
  if (!(lambda.imag() > 0.0))
    throw not_upper_half_plane("F_from_potential: Im lambda must be > 0");
  if (std::abs(lambda - iu) < 1e-14) return F_at_i_from_potential(w, tol);
  const double r = std::abs(lambda);
  if (std::abs(r - 1.0) < 1e-14)
    throw error(
        "F_from_potential: |lambda| = 1 is the seam, approach one-sided");
  const RiemannPoint z = phi(lambda);
  if (r < 1.0) return detail::m_plus_auto(w, z.value(), tol);
  return -std::conj(detail::m_minus_auto(w, std::conj(z.value()), tol));
}

cplx F_at_i_from_potential(const DiracPotential& w, double tol) {
  // m_+(iy) -> F(i) as y -> inf; extrapolate a short geometric ladder in 1/y.
  std::vector<double> us;
  std::vector<cplx> ms;
  double y = 1000.0;
  for (int j = 0; j < 4; ++j, y *= 4.0) {
    us.push_back(1.0 / y);
    ms.push_back(detail::m_plus_auto(w, cplx(0.0, y), tol));
  }
  return neville_extrapolate(us, std::move(ms), 0.0);
}

// ---------------------------------------------------------------------------
// Reflectionless defect
// ---------------------------------------------------------------------------

namespace {

void validate_defect_inputs(const std::vector<double>& x_points,
                            const std::vector<double>& y_seq) {
  if (x_points.empty()) throw error("reflectionless_defect: no sample points");
  for (double x : x_points)
    if (!(std::abs(x) > 1.0))
      throw error("reflectionless_defect: sample points must lie in |x| > 1");
  if (y_seq.size() < 3)
    throw error("reflectionless_defect: need at least three y values");
  for (std::size_t k = 0; k < y_seq.size(); ++k) {
    if (!(y_seq[k] > 0.0))
      throw error("reflectionless_defect: y values must be positive");
    if (k > 0 && !(y_seq[k] < y_seq[k - 1]))
      throw error("reflectionless_defect: y values must decrease");
  }
}

// Boundary value at y -> 0+ from samples m(x + i y_k): monotone residual
// check, then a quadratic through the last three samples.
cplx boundary_value(const std::function<cplx(cplx)>& m, double x,
                    const std::vector<double>& y_seq) {
  std::vector<cplx> vals(y_seq.size());
  for (std::size_t k = 0; k < y_seq.size(); ++k)
    vals[k] = m(cplx(x, y_seq[k]));
  double prev = -1.0;
  for (std::size_t k = 1; k < y_seq.size(); ++k) {
    const double r = std::abs(vals[k] - vals[k - 1]);
    if (prev >= 0.0 && r > 1.5 * prev + 1e-11)
      throw extrapolation_unstable(
          "reflectionless_defect: non-monotone residuals in y");
    prev = r;
  }
  std::vector<double> ys(y_seq.end() - 3, y_seq.end());
  std::vector<cplx> ms(vals.end() - 3, vals.end());
  return neville_extrapolate(ys, std::move(ms), 0.0);
}

double defect_from_evaluators(const std::function<cplx(cplx)>& mp,
                              const std::function<cplx(cplx)>& mm,
                              const std::vector<double>& x_points,
                              const std::vector<double>& y_seq) {
  double worst = 0.0;
  for (double x : x_points) {
    const cplx bp = boundary_value(mp, x, y_seq);
    const cplx bm = boundary_value(mm, x, y_seq);
    worst = std::max(worst, std::abs(bp + std::conj(bm)));
  }
  return worst;
}

}  // namespace

double reflectionless_defect(const DiracPotential& w,
                             const std::vector<double>& x_points,
                             const defect_options& opt) {
  validate_defect_inputs(x_points, opt.y_seq);
  const DiracPotential wc = w;
  const double tol = opt.m_tol;
  return defect_from_evaluators(
      [wc, tol](cplx z) { return detail::m_plus_auto(wc, z, tol); },
      [wc, tol](cplx z) { return detail::m_minus_auto(wc, z, tol); },
      x_points, opt.y_seq);
}

double reflectionless_defect(const FFunction& f,
                             const std::vector<double>& x_points,
                             const defect_options& opt) {
  validate_defect_inputs(x_points, opt.y_seq);
  const FFunction fc = f;
  return defect_from_evaluators(
      [fc](cplx z) { return m_pair_from_F(fc, z).plus; },
      [fc](cplx z) { return m_pair_from_F(fc, z).minus; }, x_points,
      opt.y_seq);
}

bool dirac_class_test(const FFunction& f, double tol) {
  return std::abs(f.value_at_i() - iu) <= tol;
}

FFunction convex_combination(
    const std::vector<std::pair<double, double>>& atoms) {
  if (atoms.empty()) throw bad_weights("convex_combination: no atoms");
  double mass = 0.0;
  std::vector<HerglotzAtom> as;
  as.reserve(atoms.size());
  for (const auto& [theta, wgt] : atoms) {
    if (!(wgt > 0.0))
      throw bad_weights("convex_combination: weights must be positive");
    mass += wgt;
    as.push_back({rotation_atom_location(theta), wgt});
  }
  if (std::abs(mass - 1.0) > 1e-12)
    throw bad_weights("convex_combination: weights must sum to 1");
  return FFunction::from_rep(HerglotzRep(0.0, std::move(as)));
}

// ---------------------------------------------------------------------------
// Bound checks
// ---------------------------------------------------------------------------

thm41_report thm41_check(const DiracPotential& w,
                         const std::vector<double>& x_points,
                         const FFunction& f, double tol) {
  if (x_points.empty()) throw error("thm41_check: no sample points");
  thm41_report rep;
  rep.norm_ok = true;
  rep.points.reserve(x_points.size());

  const Mat2 w0 = w(x_points.front());
  bool constant_w = true;
  bool all_norm_one = true;
  for (double x : x_points) {
    const Mat2 v = w(x);
    if (std::abs(v.trace()) > 1e-9 * (1.0 + v.norm_max()))
      throw error("thm41_check: potential is not trace-zero at a sample");
    const double n2 = v.a * v.a + v.b * v.b;
    const bool ok = n2 <= 1.0 + tol;
    rep.points.push_back({x, n2, ok});
    rep.norm_ok = rep.norm_ok && ok;
    constant_w = constant_w && (v - w0).norm_max() <= 1e-9;
    all_norm_one = all_norm_one && std::abs(n2 - 1.0) <= 1e-9;
  }

  // F'(i) by trapezoid contour quadrature on |lambda - i| = 1/4, 64 nodes.
  const FFunction fc = f;
  const auto coeffs =
      cauchy_taylor([&fc](cplx lam) { return fc.eval(lam); }, iu, 0.25, 1, 64);
  rep.f_prime_i = coeffs[1];
  const Mat2 at0 = w(0.0);
  rep.eq_residual = std::abs(cplx(at0.b, at0.a) + rep.f_prime_i);
  rep.eq_ok = rep.eq_residual <= tol;
  rep.equality_case = constant_w && all_norm_one;
  return rep;
}

thm42_result thm42_check(double a, double b, double a_prime, double b_prime,
                         double tol) {
  const double u = b * b - a * a + b + b_prime;
  const double v = 2.0 * a * b + a + a_prime;
  const double lhs = u * u + v * v;
  return {lhs, lhs <= 4.0 + tol, std::abs(lhs - 4.0) <= tol};
}

// ---------------------------------------------------------------------------
// Seam diagnostics
// ---------------------------------------------------------------------------

std::vector<seam_row> seam_probe(const DiracPotential& w,
                                 const std::vector<double>& thetas,
                                 int n_radial, double delta0, double m_tol) {
  if (n_radial < 3) throw error("seam_probe: need at least 3 radial offsets");
  std::vector<seam_row> rows;
  rows.reserve(thetas.size());
  for (double th : thetas) {
    const cplx dir(std::cos(th), std::sin(th));
    std::vector<double> ds(static_cast<std::size_t>(n_radial));
    std::vector<cplx> in(ds.size()), out(ds.size());
    double d = delta0;
    for (std::size_t j = 0; j < ds.size(); ++j, d *= 0.5) {
      ds[j] = d;
      in[j] = F_from_potential(w, (1.0 - d) * dir, m_tol);
      out[j] = F_from_potential(w, (1.0 + d) * dir, m_tol);
    }
    const cplx li = neville_extrapolate(ds, std::move(in), 0.0);
    const cplx lo = neville_extrapolate(ds, std::move(out), 0.0);
    rows.push_back({th, li, lo, std::abs(li - lo)});
  }
  return rows;
}

}  // namespace dircan
