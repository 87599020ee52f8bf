#include "dircan/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dircan {

namespace {

void check_psd(const Mat2& h, const char* who) {
  if (!h.is_symmetric(1e-9) || sym_eig_min(h) < -1e-9 * (1.0 + h.norm_max()))
    throw error(std::string(who) + ": H value not symmetric PSD");
}

std::size_t locate(const std::vector<double>& g, double x) {
  auto it = std::upper_bound(g.begin(), g.end(), x);
  std::size_t k = it == g.begin() ? 0 : static_cast<std::size_t>(it - g.begin()) - 1;
  if (k >= g.size() - 1) k = g.size() - 2;
  return k;
}

Mat2 interp(const std::vector<double>& g, const std::vector<Mat2>& v,
            double x) {
  const std::size_t k = locate(g, x);
  const double t = (x - g[k]) / (g[k + 1] - g[k]);
  return v[k] * (1.0 - t) + v[k + 1] * t;
}

}  // namespace

// ---------------------------------------------------------------------------
// CanonicalSystem
// ---------------------------------------------------------------------------

CanonicalSystem CanonicalSystem::constant(const Mat2& h0, norm_tag norm) {
  check_psd(h0, "CanonicalSystem::constant");
  CanonicalSystem s;
  s.norm_ = norm;
  s.h0_ = h0;
  return s;
}

CanonicalSystem CanonicalSystem::sampled(std::vector<double> grid,
                                         std::vector<Mat2> values,
                                         norm_tag norm) {
  if (grid.size() < 2 || grid.size() != values.size())
    throw error("CanonicalSystem::sampled: need matching grid/values");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1]))
      throw error("CanonicalSystem::sampled: grid must increase");
  for (const auto& v : values) check_psd(v, "CanonicalSystem::sampled");
  CanonicalSystem s;
  s.norm_ = norm;
  s.grid_ = std::move(grid);
  s.vals_ = std::move(values);
  // Central differences on the grid, one-sided at the ends.
  const std::size_t n = s.grid_.size();
  s.fd_.resize(n);
  s.fd_[0] = (s.vals_[1] - s.vals_[0]) / (s.grid_[1] - s.grid_[0]);
  s.fd_[n - 1] =
      (s.vals_[n - 1] - s.vals_[n - 2]) / (s.grid_[n - 1] - s.grid_[n - 2]);
  for (std::size_t k = 1; k + 1 < n; ++k)
    s.fd_[k] = (s.vals_[k + 1] - s.vals_[k - 1]) /
               (s.grid_[k + 1] - s.grid_[k - 1]);
  return s;
}

CanonicalSystem CanonicalSystem::sampled_with_derivative(
    std::vector<double> grid, std::vector<Mat2> values,
    std::vector<Mat2> derivs, norm_tag norm) {
  if (derivs.size() != grid.size())
    throw error("CanonicalSystem: derivative samples mismatch");
  CanonicalSystem s = sampled(std::move(grid), std::move(values), norm);
  s.dvals_ = std::move(derivs);
  return s;
}

CanonicalSystem CanonicalSystem::degenerate(double alpha) {
  CanonicalSystem s;
  s.norm_ = norm_tag::trace_one;
  s.degenerate_ = alpha;
  s.h0_ = Mat2::projection(alpha);
  return s;
}

double CanonicalSystem::degenerate_angle() const {
  if (!degenerate_) throw error("CanonicalSystem: not degenerate");
  return *degenerate_;
}

Mat2 CanonicalSystem::H(double x) const {
  if (grid_.empty()) return h0_;
  if (x < grid_.front() || x > grid_.back())
    throw domain_exceeded("CanonicalSystem::H: outside grid");
  return interp(grid_, vals_, x);
}

Mat2 CanonicalSystem::Hprime(double x) const {
  if (grid_.empty()) return Mat2::zero();
  if (x < grid_.front() || x > grid_.back())
    throw domain_exceeded("CanonicalSystem::Hprime: outside grid");
  return interp(grid_, dvals_.empty() ? fd_ : dvals_, x);
}

double CanonicalSystem::x_min() const {
  return grid_.empty() ? -kInf : grid_.front();
}
double CanonicalSystem::x_max() const {
  return grid_.empty() ? kInf : grid_.back();
}

// ---------------------------------------------------------------------------
// Dirac <-> canonical
// ---------------------------------------------------------------------------

namespace {

struct dirac_rhs0 {
  const DiracPotential* w;
  CMat2 operator()(double x) const {
    const Mat2 m = (*w)(x);
    return CMat2{-m.c, -m.d, m.a, m.b};
  }
};

}  // namespace

CanonicalSystem dirac_to_canonical(const DiracPotential& w,
                                   const std::vector<double>& grid,
                                   double tol) {
  if (grid.size() < 2 || grid.front() != 0.0)
    throw error("dirac_to_canonical: grid must start at 0");
  auto bps = w.breakpoints();
  integrate_options opt;
  opt.rel_tol = std::max(tol / 10.0, 1e-14);
  opt.breakpoints = bps ? bps.get() : nullptr;

  std::vector<Mat2> hs, hps;
  hs.reserve(grid.size());
  hps.reserve(grid.size());
  CMat2 t = CMat2::identity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0) t = propagate(dirac_rhs0{&w}, grid[k - 1], grid[k], t, opt);
    const Mat2 tr{t.a.real(), t.b.real(), t.c.real(), t.d.real()};
    if (std::abs(tr.det() - 1.0) > std::max(tol, 1e-12 * tr.frob2()))
      throw integration_failure("dirac_to_canonical: det T drift");
    const Mat2 h = tr.transpose() * tr;
    // H' = T^t (J W - W J) T, exact at the node.
    const Mat2 wv = w(grid[k]);
    const Mat2 comm = Mat2::J() * wv - wv * Mat2::J();
    hs.push_back(h);
    hps.push_back(tr.transpose() * comm * tr);
  }
  return CanonicalSystem::sampled_with_derivative(grid, std::move(hs),
                                                  std::move(hps),
                                                  norm_tag::det_one);
}

DiracPotential canonical_to_dirac(const CanonicalSystem& h, double tol) {
  if (h.is_degenerate())
    throw singular_h("canonical_to_dirac: degenerate system");
  if (h.normalization() != norm_tag::det_one)
    throw not_normalized("canonical_to_dirac: system must be det-normalized");
  if (h.is_constant()) {
    if ((h.H(0.0) - Mat2::identity()).norm_max() > tol)
      throw not_normalized("canonical_to_dirac: H(0) != 1");
    return DiracPotential::constant(Mat2::zero());
  }
  const auto& grid = h.grid();
  if (grid.front() != 0.0)
    throw not_normalized("canonical_to_dirac: grid must start at 0");
  if ((h.H(0.0) - Mat2::identity()).norm_max() > tol)
    throw not_normalized("canonical_to_dirac: H(0) != 1");

  std::vector<Mat2> w(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Mat2 hv = h.H(grid[k]);
    if (std::abs(hv.det() - 1.0) > 1e-6)
      throw not_normalized("canonical_to_dirac: det H != 1 on the grid");
    if (sym_eig_min(hv) <= tol)
      throw singular_h("canonical_to_dirac: H not positive on the grid");
    const Mat2 hp = h.Hprime(grid[k]);
    const double q = -hp.a / (2.0 * hv.a);
    const double p = 0.5 * (hp.b - hp.a * hv.b / hv.a);
    w[k] = Mat2::symmetric(0.0, q, -2.0 * p);
  }
  return DiracPotential::sampled(grid, std::move(w), gauge_tag::offdiag_zero);
}

CanonicalSystem psl2_action(const MoebiusMap& a, const CanonicalSystem& h) {
  const Mat2 b = a.inverse().matrix();  // (A.H) = B^t H B with B = A^{-1}
  if (h.is_degenerate()) {
    // B^t P_alpha B is rank one; renormalize to a projection.
    const double al = h.degenerate_angle();
    const double v1 = b.a * std::cos(al) + b.c * std::sin(al);
    const double v2 = b.b * std::cos(al) + b.d * std::sin(al);
    double beta = std::atan2(v2, v1);
    if (beta < 0.0) beta += std::numbers::pi;
    if (beta >= std::numbers::pi) beta -= std::numbers::pi;
    return CanonicalSystem::degenerate(beta);
  }
  auto conj = [&b](const Mat2& m) { return b.transpose() * m * b; };
  if (h.is_constant())
    return CanonicalSystem::constant(conj(h.H(0.0)), h.normalization());
  std::vector<Mat2> vals, derivs;
  vals.reserve(h.grid().size());
  const bool exact = h.has_exact_derivative();
  for (double x : h.grid()) {
    vals.push_back(conj(h.H(x)));
    if (exact) derivs.push_back(conj(h.Hprime(x)));
  }
  if (exact)
    return CanonicalSystem::sampled_with_derivative(
        h.grid(), std::move(vals), std::move(derivs), h.normalization());
  return CanonicalSystem::sampled(h.grid(), std::move(vals),
                                  h.normalization());
}

CanonicalSystem det_normalize(const CanonicalSystem& h, double tol) {
  if (h.is_degenerate())
    throw degenerate_system("det_normalize: det H vanishes identically");
  if (h.normalization() == norm_tag::det_one) return h;
  if (h.is_constant()) {
    const Mat2 h0 = h.H(0.0);
    const double d = h0.det();
    if (d < tol) throw degenerate_system("det_normalize: det H too small");
    return CanonicalSystem::constant(h0 / std::sqrt(d), norm_tag::det_one);
  }
  const auto& grid = h.grid();
  std::vector<double> root_det(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = h.H(grid[k]).det();
    if (d < tol)
      throw degenerate_system("det_normalize: det H vanishes on the grid");
    root_det[k] = std::sqrt(d);
  }
  // xtilde by the trapezoid rule; Htilde = H / sqrt(det H).
  std::vector<double> xt(grid.size());
  std::vector<Mat2> vals(grid.size());
  xt[0] = 0.0;
  vals[0] = h.H(grid[0]) / root_det[0];
  for (std::size_t k = 1; k < grid.size(); ++k) {
    xt[k] = xt[k - 1] +
            0.5 * (root_det[k] + root_det[k - 1]) * (grid[k] - grid[k - 1]);
    vals[k] = h.H(grid[k]) / root_det[k];
  }
  return CanonicalSystem::sampled(std::move(xt), std::move(vals),
                                  norm_tag::det_one);
}

k_matrix_result k_matrix(const CanonicalSystem& h, double x, double tol) {
  if (h.is_degenerate()) throw singular_h("k_matrix: degenerate system");
  const Mat2 hv = h.H(x);
  if (std::abs(hv.det() - 1.0) > 1e-6)
    throw not_normalized("k_matrix: det H(x) != 1");
  if (sym_eig_min(hv) <= 1e-12) throw singular_h("k_matrix: H(x) singular");
  const Mat2 hp = h.Hprime(x);
  const Mat2 s = sym_inv_sqrt(hv);
  const Mat2 k = s * hp * s;
  k_matrix_result r;
  r.K = k;
  r.norm_singular = op_norm(k);
  r.norm_det = std::sqrt(std::abs(hp.det()));  // det K = det H' when det H = 1
  r.trace = k.trace();
  if (std::abs(r.trace) > tol * (1.0 + k.norm_max()))
    throw not_normalized("k_matrix: tr K != 0, input not det-normalized");
  return r;
}

dirac_class_normalization normalize_to_dirac_class(cplx f_at_i, double tol) {
  const double b0 = f_at_i.imag();
  if (b0 <= tol)
    throw degenerate_system(
        "normalize_to_dirac_class: F(i) real, system in the degenerate class");
  const double c2 = 1.0 / b0;
  const double a = -f_at_i.real() / b0;
  return {MoebiusMap::scale_shift(std::sqrt(c2), a), c2, a};
}

std::pair<dirac_class_normalization, HerglotzRep> normalize_to_dirac_class(
    const HerglotzRep& rep, double tol) {
  const auto n = normalize_to_dirac_class(rep.value_at_i(), tol);
  return {n, rep.scaled_shifted(n.c2, n.a)};
}

// ---------------------------------------------------------------------------
// Canonical transfer and m function
// ---------------------------------------------------------------------------

namespace {

// U' = z J H(x) U.
struct canonical_rhs {
  const CanonicalSystem* h;
  cplx z;
  CMat2 operator()(double x) const {
    const Mat2 m = h->H(x);
    return CMat2{-z * m.c, -z * m.d, z * m.a, z * m.b};
  }
};

}  // namespace

CMat2 canonical_transfer(const CanonicalSystem& h, double x, cplx z,
                         double tol) {
  if (h.is_degenerate()) {
    // U' = z J P_a U with constant coefficient integrates in closed form.
    const Mat2 p = Mat2::projection(h.degenerate_angle());
    const CMat2 a{-z * p.c, -z * p.d, z * p.a, z * p.b};
    return expm(a * cplx(x));
  }
  const double lo = std::min(0.0, x), hi = std::max(0.0, x);
  if (lo < h.x_min() || hi > h.x_max())
    throw domain_exceeded("canonical_transfer: outside grid");
  integrate_options opt;
  opt.rel_tol = std::max(tol / 10.0, 1e-14);
  const auto& g = h.grid();
  opt.breakpoints = g.empty() ? nullptr : &g;
  return propagate(canonical_rhs{&h, z}, 0.0, x, CMat2::identity(), opt);
}

RiemannPoint m_plus_canonical(const CanonicalSystem& h, cplx z, double tol) {
  if (!(z.imag() > 0.0))
    throw not_upper_half_plane("m_plus_canonical: Im z must be > 0");
  if (h.is_degenerate())
    return RiemannPoint(-std::tan(h.degenerate_angle()));
  if (h.x_min() > 0.0)
    throw domain_exceeded("m_plus_canonical: grid does not reach 0");
  const auto& g = h.grid();
  return detail::weyl_pullback(canonical_rhs{&h, z}, z.imag(), h.x_max(), tol,
                               g.empty() ? nullptr : &g, nullptr);
}

}  // namespace dircan
