#include "dircan/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dircan {

namespace {

gauge_tag classify(const Mat2& w, double tol = 1e-12) {
  const double s = 1.0 + w.norm_max();
  if (std::abs(w.trace()) <= tol * s) return gauge_tag::trace_zero;
  if (std::abs(w.a) <= tol * s) return gauge_tag::offdiag_zero;
  return gauge_tag::general;
}

void check_symmetric(const Mat2& w, const char* who) {
  if (!w.is_symmetric(1e-10))
    throw error(std::string(who) + ": potential value is not symmetric");
}

std::shared_ptr<const std::vector<double>> merge_breakpoints(
    const std::shared_ptr<const std::vector<double>>& a,
    const std::shared_ptr<const std::vector<double>>& b) {
  if (!a) return b;
  if (!b) return a;
  auto out = std::make_shared<std::vector<double>>();
  std::merge(a->begin(), a->end(), b->begin(), b->end(),
             std::back_inserter(*out));
  out->erase(std::unique(out->begin(), out->end()), out->end());
  return out;
}

std::shared_ptr<const std::vector<double>> map_breakpoints(
    const std::shared_ptr<const std::vector<double>>& bps, double scale,
    double offset) {
  if (!bps) return nullptr;
  auto out = std::make_shared<std::vector<double>>();
  out->reserve(bps->size());
  for (double x : *bps) out->push_back(scale * x + offset);
  if (!out->empty() && out->front() > out->back())
    std::reverse(out->begin(), out->end());
  return out;
}

// S W S with S = diag(1, -1): flips the off-diagonal signs.
Mat2 flip_conj(const Mat2& w) { return {w.a, -w.b, -w.c, w.d}; }

}  // namespace

// ---------------------------------------------------------------------------
// DiracPotential
// ---------------------------------------------------------------------------

Mat2 DiracPotential::operator()(double x) const {
  if (!eval_) throw error("DiracPotential: empty potential");
  if (x < xlo_ || x > xhi_)
    throw domain_exceeded("DiracPotential: evaluation outside domain");
  return eval_(x);
}

DiracPotential DiracPotential::constant(const Mat2& w0) {
  check_symmetric(w0, "DiracPotential::constant");
  DiracPotential p;
  p.gauge_ = classify(w0);
  p.repr_ = repr_tag::constant;
  p.eval_ = [w0](double) { return w0; };
  p.rtail_ = std::make_pair(0.0, w0);
  p.ltail_ = std::make_pair(0.0, w0);
  return p;
}

DiracPotential DiracPotential::retagged(gauge_tag g) const {
  DiracPotential p = *this;
  p.gauge_ = g;
  return p;
}

DiracPotential DiracPotential::with_tails(
    std::optional<std::pair<double, Mat2>> right,
    std::optional<std::pair<double, Mat2>> left) const {
  DiracPotential p = *this;
  p.rtail_ = std::move(right);
  p.ltail_ = std::move(left);
  return p;
}

DiracPotential DiracPotential::with_breakpoints(
    std::shared_ptr<const std::vector<double>> bps) const {
  DiracPotential p = *this;
  p.bps_ = std::move(bps);
  return p;
}

DiracPotential DiracPotential::sampled(std::vector<double> grid,
                                       std::vector<Mat2> values,
                                       gauge_tag gauge) {
  if (grid.size() < 2 || grid.size() != values.size())
    throw error("DiracPotential::sampled: need matching grid/values, size >= 2");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1]))
      throw error("DiracPotential::sampled: grid must be strictly increasing");
  for (const auto& v : values) check_symmetric(v, "DiracPotential::sampled");

  bool tz = true, od = true;
  for (const auto& v : values) {
    const double s = 1.0 + v.norm_max();
    tz = tz && std::abs(v.trace()) <= 1e-12 * s;
    od = od && std::abs(v.a) <= 1e-12 * s;
  }
  if (gauge == gauge_tag::general) {
    if (tz) gauge = gauge_tag::trace_zero;
    else if (od) gauge = gauge_tag::offdiag_zero;
  }

  auto g = std::make_shared<std::vector<double>>(std::move(grid));
  auto v = std::make_shared<std::vector<Mat2>>(std::move(values));
  DiracPotential p;
  p.gauge_ = gauge;
  p.repr_ = repr_tag::sampled;
  p.xlo_ = g->front();
  p.xhi_ = g->back();
  p.bps_ = g;
  p.eval_ = [g, v](double x) {
    auto it = std::upper_bound(g->begin(), g->end(), x);
    std::size_t k = it == g->begin() ? 0 : (it - g->begin()) - 1;
    if (k >= g->size() - 1) k = g->size() - 2;
    const double x0 = (*g)[k], x1 = (*g)[k + 1];
    const double t = (x - x0) / (x1 - x0);
    return (*v)[k] * (1.0 - t) + (*v)[k + 1] * t;
  };
  return p;
}

DiracPotential DiracPotential::closed_form(std::function<Mat2(double)> f,
                                           double x_lo, double x_hi,
                                           gauge_tag gauge) {
  DiracPotential p;
  p.gauge_ = gauge;
  p.repr_ = repr_tag::closed_form;
  p.xlo_ = x_lo;
  p.xhi_ = x_hi;
  p.eval_ = std::move(f);
  return p;
}

DiracPotential DiracPotential::bump_perturbed(const Mat2& base, double s0,
                                              double s1,
                                              std::function<Mat2(double)> bump) {
  if (!(s1 > s0)) throw error("bump_perturbed: need s0 < s1");
  check_symmetric(base, "bump_perturbed");
  DiracPotential p;
  p.repr_ = repr_tag::closed_form;
  p.gauge_ = gauge_tag::general;
  p.eval_ = [base, s0, s1, bump](double x) {
    if (x <= s0 || x >= s1) return base;
    return base + bump(x);
  };
  auto bp = std::make_shared<std::vector<double>>(std::vector<double>{s0, s1});
  p.bps_ = bp;
  p.rtail_ = std::make_pair(s1, base);
  p.ltail_ = std::make_pair(s0, base);
  return p;
}

DiracPotential DiracPotential::shifted(double t) const {
  DiracPotential p = *this;
  if (xlo_ > -kInf) p.xlo_ = xlo_ - t;
  if (xhi_ < kInf) p.xhi_ = xhi_ - t;
  auto base = eval_;
  p.eval_ = [base, t](double x) { return base(t + x); };
  p.bps_ = map_breakpoints(bps_, 1.0, -t);
  if (rtail_) p.rtail_ = std::make_pair(rtail_->first - t, rtail_->second);
  if (ltail_) p.ltail_ = std::make_pair(ltail_->first - t, ltail_->second);
  p.patches_.reset();
  return p;
}

DiracPotential DiracPotential::reflected() const {
  DiracPotential p = *this;
  p.xlo_ = xhi_ < kInf ? -xhi_ : -kInf;
  p.xhi_ = xlo_ > -kInf ? -xlo_ : kInf;
  auto base = eval_;
  p.eval_ = [base](double x) { return flip_conj(base(-x)); };
  p.bps_ = map_breakpoints(bps_, -1.0, 0.0);
  p.rtail_.reset();
  p.ltail_.reset();
  if (ltail_) p.rtail_ = std::make_pair(-ltail_->first, flip_conj(ltail_->second));
  if (rtail_) p.ltail_ = std::make_pair(-rtail_->first, flip_conj(rtail_->second));
  // trace-zero and offdiag-zero are both preserved by S W S.
  p.patches_.reset();
  return p;
}

DiracPotential DiracPotential::plus_scalar(double a) const {
  if (a == 0.0) return *this;
  DiracPotential p = *this;
  auto base = eval_;
  p.eval_ = [base, a](double x) { return base(x) + a; };
  if (rtail_) p.rtail_ = std::make_pair(rtail_->first, rtail_->second + a);
  if (ltail_) p.ltail_ = std::make_pair(ltail_->first, ltail_->second + a);
  p.gauge_ = gauge_tag::general;
  p.patches_.reset();
  return p;
}

DiracPotential DiracPotential::rescaled(double g) const {
  if (!(g > 0.0)) throw error("DiracPotential::rescaled: g must be > 0");
  DiracPotential p = *this;
  if (xlo_ > -kInf) p.xlo_ = xlo_ / g;
  if (xhi_ < kInf) p.xhi_ = xhi_ / g;
  auto base = eval_;
  p.eval_ = [base, g](double x) { return base(g * x) * g; };
  p.bps_ = map_breakpoints(bps_, 1.0 / g, 0.0);
  if (rtail_) p.rtail_ = std::make_pair(rtail_->first / g, rtail_->second * g);
  if (ltail_) p.ltail_ = std::make_pair(ltail_->first / g, ltail_->second * g);
  p.patches_.reset();
  return p;
}

DiracPotential extreme_potential(double theta) {
  const double s = std::sin(2.0 * theta), c = std::cos(2.0 * theta);
  return DiracPotential::constant(Mat2::symmetric(s, -c, -s));
}

DiracPotential wbeta_potential(double beta) {
  return DiracPotential::constant(
      Mat2::symmetric(std::sin(beta), std::cos(beta), -std::sin(beta)));
}

// ---------------------------------------------------------------------------
// Taylor-patch representations (reconstruction output)
// ---------------------------------------------------------------------------

namespace {

cplx patch_g1(const DiracPotential::patch& pc, double x) {
  const double u = x - pc.t0;
  cplx s = 0.0;
  for (std::size_t k = pc.g1.size(); k-- > 0;) s = s * u + pc.g1[k];
  return s;
}

double patch_alpha(const DiracPotential::patch& pc, double x) {
  // alpha(x) = alpha0 + int_{t0}^{x} Im g1, integrated term by term.
  const double u = x - pc.t0;
  double s = 0.0;
  for (std::size_t k = pc.g1.size(); k-- > 0;)
    s = s * u + pc.g1[k].imag() / static_cast<double>(k + 1);
  return pc.alpha0 + s * u;
}

const DiracPotential::patch& locate_patch(
    const std::vector<DiracPotential::patch>& ps, double dt, double x) {
  const double t0 = ps.front().t0;
  auto k = static_cast<std::ptrdiff_t>(std::floor((x - t0) / dt));
  k = std::clamp<std::ptrdiff_t>(k, 0,
                                 static_cast<std::ptrdiff_t>(ps.size()) - 1);
  return ps[static_cast<std::size_t>(k)];
}

std::shared_ptr<const std::vector<double>> patch_breakpoints(
    const std::vector<DiracPotential::patch>& ps, double dt) {
  auto bp = std::make_shared<std::vector<double>>();
  bp->reserve(ps.size() + 1);
  for (const auto& pc : ps) bp->push_back(pc.t0);
  bp->push_back(ps.back().t0 + dt);
  return bp;
}

}  // namespace

DiracPotential DiracPotential::offdiag_from_patches(std::vector<patch> patches,
                                                    double dt) {
  if (patches.empty() || !(dt > 0))
    throw error("offdiag_from_patches: no patches");
  auto ps = std::make_shared<const std::vector<patch>>(std::move(patches));
  DiracPotential p;
  p.gauge_ = gauge_tag::offdiag_zero;
  p.repr_ = repr_tag::taylor_patches;
  p.xlo_ = ps->front().t0;
  p.xhi_ = ps->back().t0 + dt;
  p.bps_ = patch_breakpoints(*ps, dt);
  p.patches_ = ps;
  p.patch_dt_ = dt;
  p.eval_ = [ps, dt](double x) {
    const cplx g1 = patch_g1(locate_patch(*ps, dt, x), x);
    const double q = g1.real(), pp = g1.imag();
    return Mat2::symmetric(0.0, q, -2.0 * pp);
  };
  return p;
}

DiracPotential DiracPotential::trace_zero_from_patches(
    std::vector<patch> patches, double dt) {
  if (patches.empty() || !(dt > 0))
    throw error("trace_zero_from_patches: no patches");
  auto ps = std::make_shared<const std::vector<patch>>(std::move(patches));
  DiracPotential p;
  p.gauge_ = gauge_tag::trace_zero;
  p.repr_ = repr_tag::taylor_patches;
  p.xlo_ = ps->front().t0;
  p.xhi_ = ps->back().t0 + dt;
  p.bps_ = patch_breakpoints(*ps, dt);
  p.patches_ = ps;
  p.patch_dt_ = dt;
  p.eval_ = [ps, dt](double x) {
    const auto& pc = locate_patch(*ps, dt, x);
    const cplx g1 = patch_g1(pc, x);
    const double q = g1.real(), pp = g1.imag();
    const double two_a = 2.0 * patch_alpha(pc, x);
    const double a = pp * std::cos(two_a) - q * std::sin(two_a);
    const double b = pp * std::sin(two_a) + q * std::cos(two_a);
    return Mat2::symmetric(a, b, -a);
  };
  return p;
}

// ---------------------------------------------------------------------------
// GaugeElement
// ---------------------------------------------------------------------------

GaugeElement::GaugeElement() {
  a_ = [](double) { return 0.0; };
  ap_ = [](double) { return 0.0; };
}

GaugeElement GaugeElement::closed_form(std::function<double(double)> alpha,
                                       std::function<double(double)> alpha_prime,
                                       double shift) {
  GaugeElement g;
  g.a_ = std::move(alpha);
  g.ap_ = std::move(alpha_prime);
  g.t_ = shift;
  g.const_angle_ = false;
  return g;
}

GaugeElement GaugeElement::constant_angle(double theta, double shift) {
  GaugeElement g;
  g.a_ = [theta](double) { return theta; };
  g.ap_ = [](double) { return 0.0; };
  g.t_ = shift;
  g.const_angle_ = true;
  return g;
}

GaugeElement GaugeElement::pure_shift(double t) { return constant_angle(0.0, t); }

GaugeElement GaugeElement::sampled(std::vector<double> grid,
                                   std::vector<double> values, double shift) {
  if (grid.size() < 2 || grid.size() != values.size())
    throw non_differentiable_alpha("GaugeElement::sampled: need >= 2 samples");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(values[k]))
      throw non_differentiable_alpha("GaugeElement::sampled: non-finite value");
    if (k > 0 && !(grid[k] > grid[k - 1]))
      throw non_differentiable_alpha("GaugeElement::sampled: grid not increasing");
  }
  // Central differences, one-sided at the ends.
  std::vector<double> d(grid.size());
  const std::size_t n = grid.size();
  d[0] = (values[1] - values[0]) / (grid[1] - grid[0]);
  d[n - 1] = (values[n - 1] - values[n - 2]) / (grid[n - 1] - grid[n - 2]);
  for (std::size_t k = 1; k + 1 < n; ++k)
    d[k] = (values[k + 1] - values[k - 1]) / (grid[k + 1] - grid[k - 1]);

  auto gx = std::make_shared<std::vector<double>>(std::move(grid));
  auto vv = std::make_shared<std::vector<double>>(std::move(values));
  auto dd = std::make_shared<std::vector<double>>(std::move(d));
  auto interp = [gx](const std::shared_ptr<std::vector<double>>& ys, double x) {
    auto it = std::upper_bound(gx->begin(), gx->end(), x);
    std::size_t k = it == gx->begin() ? 0 : (it - gx->begin()) - 1;
    if (k >= gx->size() - 1) k = gx->size() - 2;
    const double t = (x - (*gx)[k]) / ((*gx)[k + 1] - (*gx)[k]);
    return (*ys)[k] * (1.0 - t) + (*ys)[k + 1] * t;
  };
  GaugeElement g;
  g.a_ = [interp, vv](double x) { return interp(vv, x); };
  g.ap_ = [interp, dd](double x) { return interp(dd, x); };
  g.t_ = shift;
  g.const_angle_ = false;
  g.xlo_ = gx->front();
  g.xhi_ = gx->back();
  g.bps_ = gx;
  return g;
}

GaugeElement GaugeElement::hermite(std::vector<double> grid,
                                   std::vector<double> values,
                                   std::vector<double> derivs, double shift) {
  if (grid.size() < 2 || grid.size() != values.size() ||
      grid.size() != derivs.size())
    throw non_differentiable_alpha("GaugeElement::hermite: bad data sizes");
  auto gx = std::make_shared<std::vector<double>>(std::move(grid));
  auto vv = std::make_shared<std::vector<double>>(std::move(values));
  auto dd = std::make_shared<std::vector<double>>(std::move(derivs));

  auto locate = [gx](double x) {
    auto it = std::upper_bound(gx->begin(), gx->end(), x);
    std::size_t k = it == gx->begin() ? 0 : (it - gx->begin()) - 1;
    if (k >= gx->size() - 1) k = gx->size() - 2;
    return k;
  };
  GaugeElement g;
  g.a_ = [gx, vv, dd, locate](double x) {
    const std::size_t k = locate(x);
    const double h = (*gx)[k + 1] - (*gx)[k];
    const double t = (x - (*gx)[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * (*vv)[k] + (t3 - 2 * t2 + t) * h * (*dd)[k] +
           (-2 * t3 + 3 * t2) * (*vv)[k + 1] + (t3 - t2) * h * (*dd)[k + 1];
  };
  g.ap_ = [gx, vv, dd, locate](double x) {
    const std::size_t k = locate(x);
    const double h = (*gx)[k + 1] - (*gx)[k];
    const double t = (x - (*gx)[k]) / h;
    const double t2 = t * t;
    return (6 * t2 - 6 * t) * ((*vv)[k] - (*vv)[k + 1]) / h +
           (3 * t2 - 4 * t + 1) * (*dd)[k] + (3 * t2 - 2 * t) * (*dd)[k + 1];
  };
  g.t_ = shift;
  g.const_angle_ = false;
  g.xlo_ = gx->front();
  g.xhi_ = gx->back();
  g.bps_ = gx;
  return g;
}

bool GaugeElement::in_A0(double tol) const {
  const double r = std::remainder(a_(0.0), std::numbers::pi);
  return t_ == 0.0 && std::abs(r) <= tol;
}

GaugeElement GaugeElement::compose(const GaugeElement& other) const {
  const GaugeElement a = *this, b = other;
  GaugeElement g;
  g.a_ = [a, b](double x) { return a.a_(x) + b.a_(a.t_ + x); };
  g.ap_ = [a, b](double x) { return a.ap_(x) + b.ap_(a.t_ + x); };
  g.t_ = a.t_ + b.t_;
  g.const_angle_ = a.const_angle_ && b.const_angle_;
  g.xlo_ = std::max(a.xlo_, b.xlo_ > -kInf ? b.xlo_ - a.t_ : -kInf);
  g.xhi_ = std::min(a.xhi_, b.xhi_ < kInf ? b.xhi_ - a.t_ : kInf);
  g.bps_ = merge_breakpoints(a.bps_, map_breakpoints(b.bps_, 1.0, -a.t_));
  return g;
}

// ---------------------------------------------------------------------------
// Transfer matrices and m functions
// ---------------------------------------------------------------------------

namespace {

// Right-hand side J (W(x) + z) of T' = A(x) T.
struct dirac_rhs {
  const DiracPotential* w;
  cplx z;
  CMat2 operator()(double x) const {
    const Mat2 m = (*w)(x);
    return CMat2{-m.c, -(m.d + z), m.a + z, m.b};
  }
};

}  // namespace

CMat2 constant_transfer(const Mat2& w0, double x, cplx z) {
  const CMat2 a{-w0.c, -(w0.d + z), w0.a + z, w0.b};
  return expm(a * cplx(x));
}

TransferMatrix transfer_matrix(const DiracPotential& w, double x, cplx z,
                               double tol) {
  const double lo = std::min(0.0, x), hi = std::max(0.0, x);
  if (lo < w.x_min() || hi > w.x_max())
    throw domain_exceeded("transfer_matrix: potential not defined on [0, x]");
  auto bps = w.breakpoints();
  integrate_options opt;
  opt.rel_tol = std::max(tol / 10.0, 1e-14);
  opt.breakpoints = bps ? bps.get() : nullptr;
  const CMat2 T = propagate(dirac_rhs{&w, z}, 0.0, x, CMat2::identity(), opt);
  const double ddrift = std::abs(T.det() - 1.0);
  if (ddrift > tol * std::max(1.0, T.norm_max()))
    throw integration_failure("transfer_matrix: determinant drift above tol");
  return {T, x, z};
}

cplx m_plus(const DiracPotential& w, cplx z, double tol,
            std::vector<m_stage>* trace) {
  if (!(z.imag() > 0.0))
    throw not_upper_half_plane("m_plus: Im z must be > 0");
  if (w.x_min() > 0.0)
    throw domain_exceeded("m_plus: potential undefined at 0");
  auto bps = w.breakpoints();
  const RiemannPoint m =
      detail::weyl_pullback(dirac_rhs{&w, z}, z.imag(), w.x_max(), tol,
                            bps ? bps.get() : nullptr, trace);
  if (m.is_infinity())
    throw no_convergence("m_plus: value escaped to infinity");
  return m.value();
}

cplx m_minus(const DiracPotential& w, cplx z, double tol) {
  return m_plus(w.reflected(), z, tol);
}

m_pair constant_m(const Mat2& w0, cplx z) {
  if (!(z.imag() > 0.0))
    throw not_upper_half_plane("constant_m: Im z must be > 0");
  check_symmetric(w0, "constant_m");
  const CMat2 a{-w0.c, -(w0.d + z), w0.a + z, w0.b};
  const cplx mu = std::sqrt(-a.det());  // principal branch, Re mu >= 0
  if (std::abs(mu) < 1e-10 || mu.real() <= 0.0)
    throw degenerate_eigenbasis("constant_m: z at a dispersion branch point");

  auto eigvec = [&a](cplx lam) {
    const cplx v1a = a.b, v2a = lam - a.a;
    const cplx v1b = lam - a.d, v2b = a.c;
    if (std::abs(v1a) + std::abs(v2a) >= std::abs(v1b) + std::abs(v2b))
      return std::make_pair(v1a, v2a);
    return std::make_pair(v1b, v2b);
  };
  const auto [p1, p2] = eigvec(-mu);  // decaying as x -> +inf
  const auto [q1, q2] = eigvec(mu);   // decaying as x -> -inf
  if (p2 == 0.0 || q2 == 0.0)
    throw degenerate_eigenbasis("constant_m: degenerate eigenvector");
  return {p1 / p2, -(q1 / q2)};
}

namespace detail {

cplx m_plus_auto(const DiracPotential& w, cplx z, double tol) {
  if (w.repr() == repr_tag::constant) return constant_m(w(0.0), z).plus;
  if (auto rt = w.right_tail()) {
    const double x1 = std::max(rt->first, 0.0);
    const cplx m_tail = constant_m(rt->second, z).plus;
    if (x1 <= 0.0) return m_tail;
    auto bps = w.breakpoints();
    integrate_options opt;
    opt.rel_tol = std::clamp(tol / 10.0, 1e-14, 1e-6);
    opt.breakpoints = bps ? bps.get() : nullptr;
    const CMat2 T =
        propagate(dirac_rhs{&w, z}, 0.0, x1, CMat2::identity(), opt);
    const RiemannPoint m = lft(T.adjugate(), RiemannPoint(m_tail));
    if (m.is_infinity()) throw no_convergence("m_plus_auto: pole hit");
    return m.value();
  }
  return m_plus(w, z, tol);
}

cplx m_minus_auto(const DiracPotential& w, cplx z, double tol) {
  return m_plus_auto(w.reflected(), z, tol);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Group actions
// ---------------------------------------------------------------------------

DiracPotential alpha_action(const GaugeElement& g, const DiracPotential& w) {
  if (g.shift() != 0.0)
    throw error("alpha_action: element has a shift, use group_action");
  const double xlo = std::max(w.x_min(), g.x_min());
  const double xhi = std::min(w.x_max(), g.x_max());
  const DiracPotential base = w;
  const GaugeElement ge = g;
  auto f = [base, ge](double x) {
    const Mat2 r = Mat2::rotation(ge.alpha(x));
    return r * base(x) * r.transpose() + ge.alpha_prime(x);
  };
  gauge_tag tag = gauge_tag::general;
  if (g.is_constant_angle() && w.gauge() == gauge_tag::trace_zero)
    tag = gauge_tag::trace_zero;
  DiracPotential out = DiracPotential::closed_form(std::move(f), xlo, xhi, tag);
  out = out.with_breakpoints(merge_breakpoints(w.breakpoints(), g.breakpoints()));
  // Constant rotations keep constant tails; a genuine alpha'(x) does not.
  if (g.is_constant_angle()) {
    const Mat2 r = Mat2::rotation(g.alpha(0.0));
    std::optional<std::pair<double, Mat2>> rt, lt;
    if (auto q = w.right_tail())
      rt = std::make_pair(q->first, r * q->second * r.transpose());
    if (auto q = w.left_tail())
      lt = std::make_pair(q->first, r * q->second * r.transpose());
    out = out.with_tails(rt, lt);
  }
  return out;
}

DiracPotential group_action(const GaugeElement& g, const DiracPotential& w) {
  const double t = g.shift();
  const GaugeElement ge = g;
  GaugeElement pure = GaugeElement::closed_form(
      [ge](double x) { return ge.alpha(x); },
      [ge](double x) { return ge.alpha_prime(x); }, 0.0);
  return alpha_action(pure, w.shifted(t));
}

offdiag_normalization normalize_offdiag(const DiracPotential& w, double x_lo,
                                        double x_hi, double tol) {
  if (!(x_lo <= 0.0 && x_hi >= 0.0))
    throw error("normalize_offdiag: working interval must contain 0");
  const DiracPotential base = w;
  auto f = [base](double x, double al) {
    const Mat2 m = base(x);
    const double c = std::cos(al), s = std::sin(al);
    return -(m.a * c * c + m.d * s * s - 2.0 * m.b * s * c);
  };
  const double h = 1e-3;
  const auto n_up = static_cast<std::size_t>(std::ceil(x_hi / h));
  const auto n_dn = static_cast<std::size_t>(std::ceil(-x_lo / h));
  std::vector<double> up_nodes{0.0}, dn_nodes{0.0};
  for (std::size_t k = 1; k <= n_up; ++k)
    up_nodes.push_back(std::min(x_hi, k * h));
  for (std::size_t k = 1; k <= n_dn; ++k)
    dn_nodes.push_back(std::max(x_lo, -static_cast<double>(k) * h));
  const auto up_vals = integrate_scalar(f, 0.0, up_nodes, tol);
  const auto dn_vals = integrate_scalar(f, 0.0, dn_nodes, tol);

  std::vector<double> grid, vals;
  for (std::size_t k = dn_nodes.size(); k-- > 1;) {
    grid.push_back(dn_nodes[k]);
    vals.push_back(dn_vals[k]);
  }
  for (std::size_t k = 0; k < up_nodes.size(); ++k) {
    grid.push_back(up_nodes[k]);
    vals.push_back(up_vals[k]);
  }
  std::vector<double> derivs(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    derivs[k] = f(grid[k], vals[k]);

  GaugeElement alpha = GaugeElement::hermite(grid, vals, derivs, 0.0);
  DiracPotential wp = alpha_action(alpha, w);
  wp = wp.retagged(gauge_tag::offdiag_zero);
  return {alpha, wp};
}

std::optional<GaugeElement> gauge_between(const DiracPotential& w1,
                                          const DiracPotential& w2,
                                          const std::vector<double>& grid,
                                          double tol) {
  if (grid.size() < 2 || grid.front() != 0.0)
    throw error("gauge_between: grid must start at 0");
  auto bps = merge_breakpoints(w1.breakpoints(), w2.breakpoints());
  integrate_options opt;
  opt.rel_tol = 1e-12;
  opt.breakpoints = bps ? bps.get() : nullptr;

  CMat2 t1 = CMat2::identity(), t2 = CMat2::identity();
  std::vector<double> angles(grid.size());
  angles[0] = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    t1 = propagate(dirac_rhs{&w1, 0.0}, grid[k - 1], grid[k], t1, opt);
    t2 = propagate(dirac_rhs{&w2, 0.0}, grid[k - 1], grid[k], t2, opt);
    // U = T2 T1^{-1}; must lie in SO(2).
    const CMat2 u = t2 * t1.adjugate();
    const Mat2 ur{u.a.real(), u.b.real(), u.c.real(), u.d.real()};
    const Mat2 defect = ur * ur.transpose() - Mat2::identity();
    if (defect.norm_max() > tol || std::abs(ur.det() - 1.0) > tol)
      return std::nullopt;
    const double theta = std::atan2(ur.c, ur.a);
    // Continue from the previous angle by the nearest 2 pi branch.
    const double cand =
        theta + 2.0 * std::numbers::pi *
                    std::round((angles[k - 1] - theta) / (2.0 * std::numbers::pi));
    if (std::abs(cand - angles[k - 1]) >= 0.5 * std::numbers::pi)
      throw grid_too_coarse("gauge_between: angle jump >= pi/2 between nodes");
    angles[k] = cand;
  }
  return GaugeElement::sampled(grid, angles, 0.0);
}

DiracPotential shift_scale(const DiracPotential& w, double a, double g) {
  if (!(g > 0.0)) throw error("shift_scale: g must be > 0");
  return w.plus_scalar(a).rescaled(g);
}

}  // namespace dircan
