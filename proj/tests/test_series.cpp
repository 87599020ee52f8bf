#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dircan/dirac.hpp"
#include "dircan/quadrature.hpp"
#include "dircan/reflectionless.hpp"
#include "dircan/series.hpp"
#include "helpers.hpp"

using namespace dircan;
using dtest::test_rng;

namespace {

// Closed-form w-chart coefficients of the extreme F functions:
// F = -1/lambda: g(w) = w + i sqrt(1 - w^2) - i; F = lambda: g(w) = -w + ...
cplx extreme_g_oracle(int n, double sign_q) {
  if (n % 2 == 1) return n == 1 ? cplx(sign_q, 0.0) : cplx(0.0, 0.0);
  const int k = n / 2;
  double binom_half = 1.0;  // binom(1/2, k)
  for (int j = 1; j <= k; ++j)
    binom_half *= (0.5 - (j - 1)) / static_cast<double>(j);
  return iu * ((k % 2 == 0) ? binom_half : -binom_half);
}

FFunction extreme_F(double theta) {
  return convex_combination({{theta, 1.0}});
}

}  // namespace

TEST_CASE("g_from_F golden sequences") {
  // F = -1/lambda (theta = pi/2): g = (1, -i/2, 0, -i/8, ...), g_1 = q + ip
  // with q = 1, p = 0.
  const auto g_inv = g_from_F(extreme_F(std::numbers::pi / 2), 10);
  for (int n = 1; n <= 10; ++n)
    CHECK(std::abs(g_inv.coeff(n) - extreme_g_oracle(n, +1.0)) < 1e-12);
  // F = lambda (theta = 0): g_1 = -1 (q = -1).
  const auto g_id = g_from_F(extreme_F(0.0), 10);
  for (int n = 1; n <= 10; ++n)
    CHECK(std::abs(g_id.coeff(n) - extreme_g_oracle(n, -1.0)) < 1e-12);
  // Envelope |g_n| <= 3^n holds with room.
  CHECK(envelope_ratio(g_inv) <= 1.0);
  CHECK(envelope_ratio(g_id) <= 1.0);
}

TEST_CASE("g_from_F radius guard") {
  // Radius hint 4 puts the quadrature circle across the slit image; the
  // sampled residuals cannot decay.
  CHECK_THROWS_AS(g_from_F(extreme_F(std::numbers::pi / 2), 16, 4.0),
                  radius_too_large);
}

TEST_CASE("f_from_F and the chart relation f_1 = -g_1") {
  const auto f_inv = f_from_F(extreme_F(std::numbers::pi / 2), 4);
  CHECK(std::abs(f_inv.coeff(1) - cplx(-1, 0)) < 1e-12);  // q = 1
  const auto f_id = f_from_F(extreme_F(0.0), 4);
  CHECK(std::abs(f_id.coeff(1) - cplx(1, 0)) < 1e-12);  // q = -1
  // delta_0 kernel path and quadrature path agree at order 2.
  const HerglotzRep d0(0.0, {{RiemannPoint(0.0), 1.0}});
  const auto direct = taylor_at_i(d0, 2);
  const auto quad = dtest::oracle_taylor(
      [&d0](cplx lam) { return herglotz_eval(d0, lam); }, iu, 0.25, 2);
  CHECK(std::abs(direct[1] - cplx(0, -1)) < 1e-15);
  CHECK(std::abs(quad[2] - cplx(0, -1)) < 1e-12);
  // Non-normalized data is rejected.
  CHECK_THROWS_AS(
      f_from_F(FFunction::from_rep(
                   HerglotzRep(0.0, {{RiemannPoint(0.0), 2.0}})), 3),
      not_normalized);
}

TEST_CASE("chart consistency through the composition of the expansions") {
  test_rng rng(301);
  const FFunction f = convex_combination(rng.combination(2, 4));
  const auto gs = g_from_F(f, 10);
  const auto fs = f_from_F(f, 4);

  // w(h) = -h / (1 - s(h)), s(h) = sum_{m>=1} (i/2)^m h^m, composed with
  // g(w) = sum g_n w^n; the h coefficients must reproduce f_n.
  constexpr std::size_t len = 6;
  dtest::poly s(len);
  for (std::size_t m = 1; m < len; ++m) s.c[m] = std::pow(0.5 * iu, m);
  dtest::poly geom(len);  // 1/(1 - s)
  geom.c[0] = 1.0;
  dtest::poly spow(len);
  spow.c[0] = 1.0;
  for (std::size_t j = 1; j < len; ++j) {
    spow = dtest::poly::mul(spow, s);
    for (std::size_t k = 0; k < len; ++k) geom.c[k] += spow.c[k];
  }
  dtest::poly w(len);  // -h * geom
  for (std::size_t k = 1; k < len; ++k) w.c[k] = -geom.c[k - 1];

  dtest::poly acc(len), wn(len);
  wn.c[0] = 1.0;
  for (int n = 1; n <= 5; ++n) {
    wn = dtest::poly::mul(wn, w);
    for (std::size_t k = 0; k < len; ++k)
      acc.c[k] += gs.coeff(n) * wn.c[k];
  }
  for (int n = 1; n <= 4; ++n)
    CHECK(std::abs(acc.c[static_cast<std::size_t>(n)] - fs.coeff(n)) < 1e-9);
}

TEST_CASE("g_evolution_rhs fixed point and errors") {
  std::vector<cplx> g;
  for (int n = 1; n <= 6; ++n) g.push_back(extreme_g_oracle(n, +1.0));
  for (int n = 1; n <= 3; ++n)
    CHECK(std::abs(g_evolution_rhs(g, 1.0, n)) < 1e-14);
  const std::vector<cplx> zero(6, 0.0);
  for (int n = 1; n <= 3; ++n)
    CHECK(std::abs(g_evolution_rhs(zero, 0.0, n)) == 0.0);
  CHECK_THROWS_AS(g_evolution_rhs(g, 1.0, 6), insufficient_coefficients);
}

TEST_CASE("f_evolution_rhs stationarity and n = 1 convention") {
  // theta = pi/2 extreme (q = 1, p = 0): f from the delta_0 kernel.
  const HerglotzRep d0(0.0, {{RiemannPoint(0.0), 1.0}});
  const auto f = taylor_at_i(d0, 5);
  for (int n = 1; n <= 3; ++n)
    CHECK(std::abs(f_evolution_rhs(f, 1.0, n)) < 1e-13);

  // The general formula at n = 1 reduces to f' = -f1^2 - 2q f1 - 2i f2 - f1.
  test_rng rng(302);
  for (int k = 0; k < 100; ++k) {
    std::vector<cplx> fr{cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                         cplx(rng.uniform(-1, 1), rng.uniform(-1, 1))};
    const double q = rng.uniform(-1, 1);
    const cplx direct =
        -fr[0] * fr[0] - 2.0 * q * fr[0] - 2.0 * iu * fr[1] - fr[0];
    CHECK(std::abs(f_evolution_rhs(fr, q, 1) - direct) < 1e-15);
  }
}

namespace {

// Nonconstant reflectionless potential in the off-diagonal gauge, obtained by
// renormalizing a constant extreme potential, with its continued function M
// available in closed form.
struct moving_frame {
  DiracPotential w;
  Mat2 w_const;

  cplx M(cplx z) const {
    if (z.imag() > 0.0) return constant_m(w_const, z).plus;
    return -std::conj(constant_m(w_const, std::conj(z)).minus);
  }
  // m(t; z) = T(t; z) . M(z) for the shifted family.
  cplx m_shift(double t, cplx z) const {
    const DiracPotential* wp = &w;
    auto rhs = [wp, z](double x) {
      const Mat2 m = (*wp)(x);
      return CMat2{-m.c, -(m.d + z), m.a + z, m.b};
    };
    integrate_options opt;
    opt.rel_tol = 1e-12;
    auto bps = w.breakpoints();
    opt.breakpoints = bps ? bps.get() : nullptr;
    const CMat2 tm = propagate(rhs, 0.0, t, CMat2::identity(), opt);
    return lft(tm, RiemannPoint(M(z))).value();
  }
  std::vector<cplx> g_at(double t, int n_max) const {
    auto c = cauchy_taylor(
        [this, t](cplx wq) { return m_shift(t, -1.0 / wq) - iu; }, 0.0, 0.5,
        n_max, 128, true);
    return {c.begin() + 1, c.end()};
  }
};

moving_frame make_frame() {
  const DiracPotential wb = wbeta_potential(0.8);
  auto norm = normalize_offdiag(wb, -0.05, 1.0);
  return {norm.w, wb(0.0)};
}

}  // namespace

TEST_CASE("g_evolution_rhs against finite differences of transported data") {
  const moving_frame fr = make_frame();
  const double t0 = 0.3, eps = 1e-3;
  const auto gm = fr.g_at(t0 - eps, 6);
  const auto g0 = fr.g_at(t0, 6);
  const auto gp = fr.g_at(t0 + eps, 6);
  const double q = fr.w(t0).b;
  // p = Im g_1 must match the potential channel -W22/2.
  CHECK(std::abs(g0[0].imag() - (-0.5 * fr.w(t0).d)) < 1e-8);
  for (int n = 1; n <= 4; ++n) {
    const cplx fd = (gp[static_cast<std::size_t>(n - 1)] -
                     gm[static_cast<std::size_t>(n - 1)]) /
                    (2.0 * eps);
    CHECK(std::abs(fd - g_evolution_rhs(g0, q, n)) < 1e-5);
  }
}

TEST_CASE("f_evolution_rhs against finite differences of transported data") {
  const moving_frame fr = make_frame();
  const double t0 = 0.3, eps = 1e-3;
  auto f_at = [&fr](double t) {
    auto c = dtest::oracle_taylor(
        [&fr, t](cplx lam) { return fr.m_shift(t, phi(lam).value()); },
        iu, 0.25, 6, 128);
    return std::vector<cplx>(c.begin() + 1, c.end());
  };
  const auto fm = f_at(t0 - eps), f0 = f_at(t0), fp = f_at(t0 + eps);
  const double q = fr.w(t0).b;
  for (int n = 1; n <= 3; ++n) {
    const cplx fd = (fp[static_cast<std::size_t>(n - 1)] -
                     fm[static_cast<std::size_t>(n - 1)]) /
                    (2.0 * eps);
    CHECK(std::abs(fd - f_evolution_rhs(f0, q, n)) < 1e-5);
  }
}

TEST_CASE("derivative_cascade basics") {
  // Stationary input: one cascade step vanishes.
  const auto gs = g_from_F(extreme_F(std::numbers::pi / 2), 10);
  const CoeffTable t = derivative_cascade(gs.coeffs, 3);
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(t.at(n, 1)) < 1e-11);
  // Zero input stays zero.
  const CoeffTable z = derivative_cascade(std::vector<cplx>(8, 0.0), 7);
  for (int n = 1; n <= 4; ++n)
    for (int N = 1; N <= 7 - n; ++N) CHECK(std::abs(z.at(n, N)) == 0.0);
  CHECK_THROWS_AS(derivative_cascade(std::vector<cplx>(5, 0.0), 5),
                  insufficient_depth);
}

TEST_CASE("cascade against the majorant table") {
  test_rng rng(303);
  const FFunction f = convex_combination(rng.combination(2, 3));
  const auto gs = g_from_F(f, 12);
  const CoeffTable t = derivative_cascade(gs.coeffs, 11);
  const BoundTable bt = bound_tables(1.0, 12, 11);
  for (int n = 1; n <= 12; ++n)
    for (int N = 0; N <= std::min(11, 12 - n); ++N)
      CHECK(std::abs(t.at(n, N)) <= bt.b(n, N) * (1.0 + 1e-12));
}

TEST_CASE("cascade N = 0 row reproduces the evolution right side") {
  test_rng rng(304);
  const FFunction f = convex_combination(rng.combination(2, 4));
  const auto gs = g_from_F(f, 10);
  const CoeffTable t = derivative_cascade(gs.coeffs, 9);
  const double q = gs.coeff(1).real();
  for (int n = 1; n <= 9; ++n)
    CHECK(std::abs(t.at(n, 1) - g_evolution_rhs(gs.coeffs, q, n)) < 1e-16);
}

TEST_CASE("bound tables: anchors, closed form, domination") {
  const BoundTable bt = bound_tables(1.0, 13, 12);
  CHECK(bt.b(1, 0) == doctest::Approx(3.0));
  CHECK(bt.b(1, 1) == doctest::Approx(45.0));
  CHECK(bt.b(2, 1) == doctest::Approx(270.0));
  for (int n = 1; n <= 13; ++n)
    for (int N = 0; N <= 12; ++N) {
      CHECK(bt.a(n, N) <= bt.b(n, N) * (1.0 + 1e-13));
      if (n + N <= 12)
        CHECK(bt.b(n, N) ==
              doctest::Approx(cauchy_coeffs(1.0, n, N)).epsilon(1e-10));
    }
  // General r anchors.
  const BoundTable b2 = bound_tables(2.0, 3, 2);
  CHECK(b2.b(1, 1) == doctest::Approx(45.0 / 4.0));
  CHECK(b2.b(2, 1) == doctest::Approx(270.0 / 8.0));
}

TEST_CASE("cauchy_coeffs closed form") {
  CHECK(cauchy_coeffs(1.0, 1, 0) == doctest::Approx(3.0));
  CHECK(cauchy_coeffs(2.0, 3, 0) == doctest::Approx(std::pow(1.5, 3)));
  for (int N = 0; N <= 6; ++N)
    CHECK(cauchy_coeffs(1.0, 1, N) ==
          doctest::Approx(3.0 * std::pow(15.0, N)));
}

TEST_CASE("exact rational tables match the closed form") {
  const auto ex = bound_tables_scaled_exact(13);
  for (int n = 1; n + 0 <= 12; ++n)
    for (int N = 0; n + N <= 12; ++N) {
      const rational b = ex.B[static_cast<std::size_t>(n - 1)]
                             [static_cast<std::size_t>(N)];
      const rational c = cauchy_coeffs_scaled_exact(n, N);
      CHECK(b == c);
      CHECK(ex.A[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(N)]
              <= b);
    }
  CHECK_THROWS_AS(bound_tables_scaled_exact(25), error);
}
