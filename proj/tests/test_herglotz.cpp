#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dircan/herglotz.hpp"
#include "helpers.hpp"

using namespace dircan;
using dtest::test_rng;

namespace {
constexpr double kGolden = 0.61803398874989485;  // (sqrt 5 - 1)/2
}

TEST_CASE("phi special values") {
  CHECK(phi(cplx(0, 1)).is_infinity());                 // phi(i) = inf
  CHECK(phi(cplx(1, 0)).value() == doctest::Approx(1.0));  // 2/(1+1)
  const RiemannPoint v = phi(cplx(0, 0.5));
  CHECK(v.value().imag() > 0.0);  // semidisk goes to the upper half plane
  CHECK(phi(RiemannPoint::infinity()).value() == 0.0);
}

TEST_CASE("phi branch geometry") {
  test_rng rng(201);
  for (int k = 0; k < 200; ++k) {
    // Open upper semidisk -> C+.
    const double r = rng.uniform(0.05, 0.95);
    const double th = rng.uniform(0.05, std::numbers::pi - 0.05);
    const cplx inside = std::polar(r, th);
    CHECK(phi(inside).value().imag() > 0.0);
    // Exterior in C+ -> C-.
    const cplx outside = std::polar(1.0 / r, th);
    CHECK(phi(outside).value().imag() < 0.0);
    // Upper semicircle -> U u {inf}: real with |value| > 1.
    const cplx arc = std::polar(1.0, th);
    const cplx u = phi(arc).value();
    CHECK(std::abs(u.imag()) < 1e-12);
    CHECK(std::abs(u.real()) > 1.0 - 1e-12);
  }
}

TEST_CASE("phi_inverse branches") {
  // phi(i) = inf: the semidisk branch at infinity is i.
  CHECK(std::abs(phi_inverse(RiemannPoint::infinity(), phi_branch::semidisk) -
                 cplx(0, 1)) < 1e-15);
  // z = 2i: root of lambda^2 + i lambda + 1 = 0 with |lambda| < 1.
  const cplx sd = phi_inverse(cplx(0, 2), phi_branch::semidisk);
  CHECK(std::abs(sd - cplx(0, kGolden)) < 1e-14);
  // Exterior partner is the reciprocal root; the roundtrip holds on both.
  const cplx ext = phi_inverse(cplx(0, 2), phi_branch::exterior);
  CHECK(std::abs(sd * ext - 1.0) < 1e-14);
  for (const cplx z : {cplx(3.0, 0.1), cplx(-2.0, 0.4), cplx(0.2, 0.9)}) {
    const cplx a = phi_inverse(z, phi_branch::semidisk);
    const cplx b = phi_inverse(z, phi_branch::exterior);
    CHECK(std::abs(phi(a).value() - z) < 1e-12);
    CHECK(std::abs(phi(b).value() - z) < 1e-12);
    CHECK(std::abs(a) < 1.0);
    CHECK(std::abs(b) > 1.0);
  }
  CHECK_THROWS_AS(phi_inverse(cplx(0.5, 0.0), phi_branch::semidisk),
                  slit_input);
  CHECK_THROWS_AS(phi_inverse(cplx(1.0, 0.0), phi_branch::semidisk),
                  slit_input);
}

TEST_CASE("phi_inverse_upper covers both half planes") {
  // z in C+ -> upper semidisk; z in C- -> upper exterior; z in U -> upper arc.
  const cplx a = phi_inverse_upper(RiemannPoint(cplx(0, 2)));
  CHECK(a.imag() > 0.0);
  CHECK(std::abs(a) < 1.0);
  const cplx b = phi_inverse_upper(RiemannPoint(cplx(0, -2)));
  CHECK(b.imag() > 0.0);
  CHECK(std::abs(b) > 1.0);
  const cplx c = phi_inverse_upper(RiemannPoint(cplx(2, 0)));
  CHECK(c.imag() > 0.0);
  CHECK(std::abs(std::abs(c) - 1.0) < 1e-12);
  CHECK(std::abs(phi(c).value() - cplx(2, 0)) < 1e-12);
}

TEST_CASE("phi expansion coefficients") {
  CHECK(phi_expansion_coeff(-1) == cplx(1.0));
  CHECK(std::abs(phi_expansion_coeff(0) - cplx(0, -0.5)) < 1e-16);
  // Partial sum through n = 20 at h = 0.1i matches a direct evaluation.
  const cplx h(0, 0.1);
  cplx sum = phi_expansion_coeff(-1) / h;
  cplx hp = 1.0;
  for (int n = 0; n <= 20; ++n) {
    sum += phi_expansion_coeff(n) * hp;
    hp *= h;
  }
  CHECK(std::abs(sum - phi(cplx(0, 1) + h).value()) < 1e-12);
}

TEST_CASE("herglotz_eval examples") {
  // nu = delta_0: F(lambda) = -1/lambda, so F(2i) = i/2.
  const HerglotzRep d0(0.0, {{RiemannPoint(0.0), 1.0}});
  CHECK(std::abs(herglotz_eval(d0, cplx(0, 2)) - cplx(0, 0.5)) < 1e-15);
  // Kernel at t = inf is lambda itself.
  const HerglotzRep dinf(0.0, {{RiemannPoint::infinity(), 1.0}});
  CHECK(std::abs(herglotz_eval(dinf, cplx(1, 1)) - cplx(1, 1)) < 1e-15);
  // F(i) = a + i (total mass).
  const HerglotzRep two(0.5, {{RiemannPoint(1.0), 0.5},
                              {RiemannPoint(-1.0), 0.5}});
  CHECK(std::abs(two.value_at_i() - cplx(0.5, 1.0)) < 1e-15);
  CHECK(std::abs(herglotz_eval(two, cplx(0, 1)) - cplx(0.5, 1.0)) < 1e-15);
  CHECK_THROWS_AS(herglotz_eval(d0, cplx(1, -0.1)), not_upper_half_plane);
}

TEST_CASE("herglotz positivity on random data") {
  test_rng rng(202);
  for (int rep = 0; rep < 20; ++rep) {
    const HerglotzRep r = rng.normalized_rep();
    for (int k = 0; k < 20; ++k)
      CHECK(herglotz_eval(r, rng.upper_z(1e-2, 4.0, 5.0)).imag() >= 0.0);
  }
}

TEST_CASE("rotation_form") {
  // Atom at t = 0 is the rotation by pi/2 (kernel -1/lambda).
  const HerglotzRep d0(0.0, {{RiemannPoint(0.0), 1.0}});
  auto rf = rotation_form(d0);
  REQUIRE(rf.size() == 1);
  CHECK(rf[0].first == doctest::Approx(std::numbers::pi / 2));
  // Atom at t = inf is the identity rotation.
  const HerglotzRep dinf(0.0, {{RiemannPoint::infinity(), 1.0}});
  CHECK(rotation_form(dinf)[0].first == doctest::Approx(0.0));
  // Pointwise agreement of the two forms for a 3-atom representation.
  const HerglotzRep rep(0.0, {{RiemannPoint(0.3), 0.25},
                              {RiemannPoint(-2.0), 0.35},
                              {RiemannPoint::infinity(), 0.4}});
  const cplx lam(0.3, 0.4);
  cplx via_rot = 0.0;
  for (auto& [th, w] : rotation_form(rep))
    via_rot += w * rotation(th)(lam).value();
  CHECK(std::abs(via_rot - herglotz_eval(rep, lam)) < 1e-12);
  // Shifted representations have no pure rotation form.
  CHECK_THROWS_AS(rotation_form(HerglotzRep(0.3, {{RiemannPoint(0.0), 1.0}})),
                  nonzero_shift);
  // theta(t) and the atom location map invert each other.
  for (double th : {0.2, 1.0, std::numbers::pi / 2, 2.8}) {
    const HerglotzRep single(0.0, {{rotation_atom_location(th), 1.0}});
    CHECK(rotation_form(single)[0].first == doctest::Approx(th));
  }
}

TEST_CASE("taylor_at_i examples and Lemma-type bounds") {
  // nu = delta_0: f_n = i^{n+1}, all of modulus one.
  const HerglotzRep d0(0.0, {{RiemannPoint(0.0), 1.0}});
  const auto f = taylor_at_i(d0, 4);
  CHECK(std::abs(f[0] - cplx(-1, 0)) < 1e-15);
  CHECK(std::abs(f[1] - cplx(0, -1)) < 1e-15);
  CHECK(std::abs(f[2] - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(f[3] - cplx(0, 1)) < 1e-15);

  // nu = (delta_1 + delta_{-1})/2: f_1 = 0.
  const HerglotzRep pm(0.0, {{RiemannPoint(1.0), 0.5},
                             {RiemannPoint(-1.0), 0.5}});
  CHECK(std::abs(taylor_at_i(pm, 1)[0]) < 1e-15);

  // Any single atom has |f_1| = 1.
  test_rng rng(203);
  for (int k = 0; k < 10; ++k) {
    const HerglotzRep single(
        0.0, {{rotation_atom_location(rng.uniform(0.01, 3.1)), 1.0}});
    CHECK(std::abs(std::abs(taylor_at_i(single, 1)[0]) - 1.0) < 1e-12);
  }

  // |f_n| <= 1 for 50 random normalized representations.
  for (int rep = 0; rep < 50; ++rep) {
    const auto fs = taylor_at_i(rng.normalized_rep(), 12);
    for (const cplx& fn : fs) CHECK(std::abs(fn) <= 1.0 + 1e-12);
  }

  CHECK_THROWS_AS(taylor_at_i(HerglotzRep(0.0, {{RiemannPoint(0.0), 0.7}}), 3),
                  not_normalized);
}

TEST_CASE("taylor_at_i against contour quadrature") {
  test_rng rng(204);
  for (int rep = 0; rep < 5; ++rep) {
    const HerglotzRep r = rng.normalized_rep();
    const auto direct = taylor_at_i(r, 8);
    const auto quad = dtest::oracle_taylor(
        [&r](cplx lam) { return herglotz_eval(r, lam); }, cplx(0, 1), 0.25, 8);
    for (int n = 1; n <= 8; ++n)
      CHECK(std::abs(direct[n - 1] - quad[static_cast<std::size_t>(n)]) <
            1e-9);
  }
}

TEST_CASE("disk_coeff_transform") {
  std::vector<cplx> e1{1, 0, 0, 0, 0};
  for (int N = 1; N <= 5; ++N)
    CHECK(std::abs(disk_coeff_transform(e1, N) - cplx(0, 2)) < 1e-15);
  std::vector<cplx> e2{0, 1, 0, 0, 0};
  CHECK(std::abs(disk_coeff_transform(e2, 3) - cplx(-8, 0)) < 1e-13);
  // All-ones input stays within 2 * 3^{N-1}.
  std::vector<cplx> ones(20, 1.0);
  double bound = 2.0;
  for (int N = 1; N <= 20; ++N) {
    CHECK(std::abs(disk_coeff_transform(ones, N)) <= bound * (1 + 1e-12));
    bound *= 3.0;
  }
  CHECK_THROWS_AS(disk_coeff_transform(e2, 9), insufficient_coefficients);
}

TEST_CASE("herglotz_distance on the sampled disk") {
  const HerglotzRep id(0.0, {{RiemannPoint::infinity(), 1.0}});   // lambda
  const HerglotzRep inv(0.0, {{RiemannPoint(0.0), 1.0}});         // -1/lambda
  auto sample = [](const HerglotzRep& r) {
    return sample_on_distance_grid([&r](cplx z) {
      return RiemannPoint(herglotz_eval(r, z));
    });
  };
  const auto s_id = sample(id), s_inv = sample(inv);
  CHECK(herglotz_distance(s_id, s_id) == 0.0);
  CHECK(herglotz_distance(s_id, s_inv) ==
        doctest::Approx(herglotz_distance(s_inv, s_id)));
  CHECK(herglotz_distance(s_id, s_inv) > 0.1);

  test_rng rng(205);
  for (int k = 0; k < 5; ++k) {
    const auto a = sample(rng.normalized_rep());
    const auto b = sample(rng.normalized_rep());
    CHECK(herglotz_distance(a, b) == doctest::Approx(herglotz_distance(b, a)));
    CHECK(herglotz_distance(a, b) >= 0.0);
  }
  auto shorter = s_id;
  shorter.pop_back();
  CHECK_THROWS_AS(herglotz_distance(shorter, s_inv), grid_mismatch);
}
