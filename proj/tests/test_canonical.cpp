#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dircan/canonical.hpp"
#include "helpers.hpp"

using namespace dircan;
using dtest::test_rng;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    g[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
  return g;
}

}  // namespace

TEST_CASE("dirac_to_canonical: free potential and structural checks") {
  const auto grid = linspace(0.0, 2.0, 101);
  const DiracPotential free = DiracPotential::constant(Mat2::zero());
  const CanonicalSystem h0 = dirac_to_canonical(free, grid);
  for (double x : {0.0, 0.7, 2.0})
    CHECK((h0.H(x) - Mat2::identity()).norm_max() < 1e-12);

  const DiracPotential wb = wbeta_potential(0.8);
  const CanonicalSystem h = dirac_to_canonical(wb, grid);
  CHECK((h.H(0.0) - Mat2::identity()).norm_max() < 1e-13);
  for (double x : grid) {
    const Mat2 v = h.H(x);
    CHECK(std::abs(v.det() - 1.0) < 1e-9);
    CHECK(v.is_symmetric(1e-12));
  }
}

TEST_CASE("dirac_to_canonical against the constant-coefficient exponential") {
  const DiracPotential w0 = extreme_potential(0.0);
  const Mat2 wv = w0(0.0);
  const auto grid = linspace(0.0, 1.5, 61);
  const CanonicalSystem h = dirac_to_canonical(w0, grid);
  for (double x : {0.3, 0.9, 1.5}) {
    const CMat2 t = constant_transfer(wv, x, 0.0);
    const Mat2 tr{t.a.real(), t.b.real(), t.c.real(), t.d.real()};
    const Mat2 ref = tr.transpose() * tr;
    CHECK((h.H(x) - ref).norm_max() < 1e-9);
  }
}

TEST_CASE("canonical_to_dirac: identity, factorization, roundtrip") {
  const CanonicalSystem id =
      CanonicalSystem::constant(Mat2::identity(), norm_tag::det_one);
  const DiracPotential w0 = canonical_to_dirac(id);
  CHECK(w0(3.0).norm_max() == 0.0);

  // Triangular factorization identity on a random det-one positive matrix:
  // T = [[R1, H12/R1], [0, 1/R1]] reproduces H = T^t T entrywise.
  test_rng rng(501);
  for (int k = 0; k < 10; ++k) {
    const double h11 = rng.uniform(0.3, 3.0);
    const double h12 = rng.uniform(-1.0, 1.0);
    const double h22 = (1.0 + h12 * h12) / h11;  // det = 1
    const Mat2 h = Mat2::symmetric(h11, h12, h22);
    const double r1 = std::sqrt(h11);
    const Mat2 t{r1, h12 / r1, 0.0, 1.0 / r1};
    CHECK((t.transpose() * t - h).norm_max() < 1e-12);
  }

  // Roundtrip: canonical_to_dirac . dirac_to_canonical recovers the
  // off-diagonal-zero gauge representative.
  const DiracPotential wb = wbeta_potential(1.1);
  const auto grid = linspace(0.0, 2.0, 201);
  const DiracPotential back = canonical_to_dirac(dirac_to_canonical(wb, grid));
  const auto norm = normalize_offdiag(wb, -0.05, 2.0);
  for (double x : {0.0, 0.5, 1.3, 2.0})
    CHECK((back(x) - norm.w(x)).norm_max() < 1e-7);
}

TEST_CASE("canonical_to_dirac input gates") {
  const CanonicalSystem bad_norm =
      CanonicalSystem::constant(Mat2::identity() * 0.5, norm_tag::trace_one);
  CHECK_THROWS_AS(canonical_to_dirac(bad_norm), not_normalized);
  const CanonicalSystem off =
      CanonicalSystem::constant(Mat2::symmetric(2.0, 0.0, 0.5),
                                norm_tag::det_one);
  CHECK_THROWS_AS(canonical_to_dirac(off), not_normalized);
  CHECK_THROWS_AS(canonical_to_dirac(CanonicalSystem::degenerate(0.3)),
                  singular_h);
}

TEST_CASE("psl2_action") {
  const auto grid = linspace(0.0, 8.0, 801);
  const CanonicalSystem h = dirac_to_canonical(extreme_potential(0.0), grid);

  // Identity leaves H alone.
  const CanonicalSystem same = psl2_action(MoebiusMap::identity(), h);
  CHECK((same.H(1.0) - h.H(1.0)).norm_max() < 1e-14);

  // Rotations preserve H(0) = 1.
  const CanonicalSystem rot = psl2_action(rotation(0.77), h);
  CHECK((rot.H(0.0) - Mat2::identity()).norm_max() < 1e-12);
  CHECK(std::abs(rot.H(1.3).det() - 1.0) < 1e-9);

  // Group action on coefficients is exact matrix algebra.
  const MoebiusMap a(1.2, 0.3, -0.1, 1.0), b(0.8, -0.4, 0.2, 1.5);
  const CanonicalSystem lhs = psl2_action(a * b, h);
  const CanonicalSystem rhs = psl2_action(a, psl2_action(b, h));
  for (double x : {0.0, 0.9, 2.4})
    CHECK((lhs.H(x) - rhs.H(x)).norm_max() < 1e-13);

  // m transport: +-m(z; A.H) = A . (+-m(z; H)) at z = 2i.
  const MoebiusMap g = MoebiusMap::scale_shift(2.0, 3.0);  // (2, 1.5; 0, 0.5)
  const CanonicalSystem gh = psl2_action(g, h);
  const cplx z(0, 2);
  const RiemannPoint lhs_m = m_plus_canonical(gh, z, 1e-8);
  const RiemannPoint rhs_m = g(m_plus_canonical(h, z, 1e-8));
  CHECK(chordal(lhs_m, rhs_m) < 1e-7);

  // The degenerate class is preserved.
  const CanonicalSystem pz = psl2_action(g, CanonicalSystem::degenerate(0.4));
  CHECK(pz.is_degenerate());
}

TEST_CASE("det_normalize") {
  // Constant trace-one H = I/2 becomes the identity with x stretched by 1/2.
  const auto grid = linspace(0.0, 4.0, 41);
  std::vector<Mat2> half(grid.size(), Mat2::identity() * 0.5);
  const CanonicalSystem ht =
      CanonicalSystem::sampled(grid, half, norm_tag::trace_one);
  const CanonicalSystem hd = det_normalize(ht);
  CHECK(hd.normalization() == norm_tag::det_one);
  CHECK(hd.grid().back() == doctest::Approx(2.0));
  CHECK((hd.H(1.0) - Mat2::identity()).norm_max() < 1e-12);

  // Already det-normalized input passes through unchanged.
  const CanonicalSystem h =
      dirac_to_canonical(wbeta_potential(0.6), linspace(0.0, 8.0, 801));
  const CanonicalSystem h2 = det_normalize(h);
  CHECK((h2.H(0.5) - h.H(0.5)).norm_max() == 0.0);

  // m preservation through the reparametrization: trace-normalize by hand,
  // then det-normalize back and compare m at z = 3i.
  const auto& g = h.grid();
  std::vector<double> xt(g.size());
  std::vector<Mat2> vals(g.size());
  xt[0] = 0.0;
  vals[0] = h.H(g[0]) / h.H(g[0]).trace();
  for (std::size_t k = 1; k < g.size(); ++k) {
    const double tr0 = h.H(g[k - 1]).trace(), tr1 = h.H(g[k]).trace();
    xt[k] = xt[k - 1] + 0.5 * (tr0 + tr1) * (g[k] - g[k - 1]);
    vals[k] = h.H(g[k]) / tr1;
  }
  const CanonicalSystem htr =
      CanonicalSystem::sampled(std::move(xt), std::move(vals),
                               norm_tag::trace_one);
  const CanonicalSystem hback = det_normalize(htr);
  const cplx z(0, 3);
  CHECK(chordal(m_plus_canonical(hback, z, 1e-8),
                m_plus_canonical(h, z, 1e-8)) < 1e-6);

  CHECK_THROWS_AS(det_normalize(CanonicalSystem::degenerate(1.0)),
                  degenerate_system);
}

TEST_CASE("k_matrix") {
  const CanonicalSystem id =
      CanonicalSystem::constant(Mat2::identity(), norm_tag::det_one);
  const auto k0 = k_matrix(id, 0.3);
  CHECK(k0.norm_singular == 0.0);
  CHECK(k0.norm_det == 0.0);

  // H from a constant extreme potential: H'(0) = 2 [[-b, a], [a, b]] and the
  // norm is exactly 2 everywhere.
  const double beta = 1.4;
  const DiracPotential wb = wbeta_potential(beta);
  const CanonicalSystem h = dirac_to_canonical(wb, linspace(0.0, 3.0, 301));
  const Mat2 hp0 = h.Hprime(0.0);
  const Mat2 expect =
      Mat2::symmetric(-2.0 * std::cos(beta), 2.0 * std::sin(beta),
                      2.0 * std::cos(beta));
  CHECK((hp0 - expect).norm_max() < 1e-12);
  for (double x : {0.0, 0.9, 1.9, 3.0}) {
    const auto k = k_matrix(h, x);
    CHECK(std::abs(k.norm_singular - 2.0) < 1e-8);
    CHECK(std::abs(k.norm_det - 2.0) < 1e-8);
    CHECK(std::abs(k.trace) < 1e-9);
  }

  // Internal consistency along a non-reflectionless potential: the largest
  // singular value equals |det H'|^{1/2} whenever det H = 1.
  const DiracPotential bumped = DiracPotential::bump_perturbed(
      wb(0.0), 0.0, 1.0, [](double x) {
        const double s = std::sin(std::numbers::pi * x);
        return Mat2::symmetric(0.4 * s * s, 0.1 * s * s, -0.2 * s * s);
      });
  const CanonicalSystem hb = dirac_to_canonical(bumped, linspace(0, 2, 201));
  for (double x : {0.2, 0.5, 0.8, 1.4}) {
    const auto k = k_matrix(hb, x);
    CHECK(std::abs(k.norm_singular - k.norm_det) < 1e-8);
  }
}

TEST_CASE("normalize_to_dirac_class") {
  // F(i) = i: nothing to do.
  const auto n_id = normalize_to_dirac_class(cplx(0, 1));
  CHECK(n_id.g.equals(MoebiusMap::identity(), 1e-14));

  // F = 2 lambda + 1: F(i) = 1 + 2i -> c^2 = 1/2, a = -1/2, g.F = lambda.
  const HerglotzRep f21(1.0, {{RiemannPoint::infinity(), 2.0}});
  const auto [n, rep] = normalize_to_dirac_class(f21);
  CHECK(n.c2 == doctest::Approx(0.5));
  CHECK(n.a == doctest::Approx(-0.5));
  CHECK(std::abs(rep.value_at_i() - iu) < 1e-15);
  const cplx lam(0.4, 0.9);
  CHECK(std::abs(herglotz_eval(rep, lam) - lam) < 1e-14);
  // The group element acts the same way on values.
  CHECK(std::abs(n.g(herglotz_eval(f21, lam)).value() - lam) < 1e-14);

  // Real constant F: the degenerate class.
  CHECK_THROWS_AS(normalize_to_dirac_class(cplx(0.7, 0.0)), degenerate_system);
  CHECK_THROWS_AS(normalize_to_dirac_class(HerglotzRep(0.7, {})),
                  degenerate_system);
}

TEST_CASE("degenerate systems expose constant m functions") {
  const CanonicalSystem pz = CanonicalSystem::degenerate(0.3);
  const RiemannPoint m = m_plus_canonical(pz, cplx(0, 2), 1e-9);
  CHECK(m.is_finite());
  CHECK(m.value().real() == doctest::Approx(-std::tan(0.3)));
  const CanonicalSystem phalf =
      CanonicalSystem::degenerate(std::numbers::pi / 2);
  CHECK(m_plus_canonical(phalf, cplx(0, 2), 1e-9).is_finite());
}
