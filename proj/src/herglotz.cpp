#include "dircan/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dircan {

RiemannPoint phi(const RiemannPoint& lambda) {
  if (lambda.is_infinity()) return RiemannPoint(0.0);
  const cplx l = lambda.value();
  const cplx den = l * l + 1.0;
  if (den == 0.0) return RiemannPoint::infinity();
  return RiemannPoint(2.0 * l / den);
}

namespace {

bool on_slit(const RiemannPoint& z, double tol) {
  if (z.is_infinity()) return false;
  const cplx v = z.value();
  return std::abs(v.imag()) <= tol && std::abs(v.real()) <= 1.0 + tol;
}

// Both roots of lambda^2 - (2/z) lambda + 1 = 0; first is the semidisk root.
std::pair<cplx, cplx> phi_preimages(const RiemannPoint& z, double slit_tol) {
  if (on_slit(z, slit_tol))
    throw slit_input("phi_inverse: input on the slit [-1,1]");
  if (z.is_infinity()) return {iu, -iu};

  const cplx zv = z.value();
  // Roots (1 +/- u)/z with u = sqrt(1 - z^2); form the larger numerator to
  // avoid cancellation, the partner is its exact reciprocal.
  const cplx u = std::sqrt(1.0 - zv * zv);
  const cplx n1 = 1.0 + u, n2 = 1.0 - u;
  const cplx r1 = (std::abs(n1) >= std::abs(n2) ? n1 : n2) / zv;
  const cplx r2 = 1.0 / r1;

  cplx sd = std::abs(r1) <= std::abs(r2) ? r1 : r2;
  cplx ext = std::abs(r1) <= std::abs(r2) ? r2 : r1;
  // Tie on the unit circle (z in U u {inf}): roots are conjugate, take the
  // upper arc for the semidisk branch.
  if (std::abs(std::abs(sd) - 1.0) <= 1e-9 && sd.imag() < 0.0)
    std::swap(sd, ext);
  return {sd, ext};
}

}  // namespace

cplx phi_inverse(const RiemannPoint& z, phi_branch branch, double slit_tol) {
  auto [sd, ext] = phi_preimages(z, slit_tol);
  return branch == phi_branch::semidisk ? sd : ext;
}

cplx phi_inverse_upper(const RiemannPoint& z, double slit_tol) {
  // The preimages are {lambda, 1/lambda}; exactly one lies in the closed
  // upper half plane (upper arc for z in U).
  auto [sd, ext] = phi_preimages(z, slit_tol);
  return sd.imag() >= 0.0 ? sd : ext;
}

cplx phi_expansion_coeff(int n) {
  if (n < -1) throw error("phi_expansion_coeff: index must be >= -1");
  if (n == -1) return 1.0;
  return -std::pow(0.5 * iu, n + 1);
}

// ---------------------------------------------------------------------------

HerglotzRep::HerglotzRep(double shift, std::vector<HerglotzAtom> atoms)
    : shift_(shift), atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (!(a.w > 0.0)) throw bad_weights("HerglotzRep: weights must be > 0");
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
      const auto &p = atoms_[i].t, &q = atoms_[j].t;
      if (p.is_infinity() != q.is_infinity()) continue;
      if (p.is_infinity() || p.value() == q.value())
        throw bad_weights("HerglotzRep: atom locations must be distinct");
    }
}

double HerglotzRep::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.w;
  return m;
}

bool HerglotzRep::normalized(double tol) const {
  return std::abs(shift_) <= tol && std::abs(total_mass() - 1.0) <= tol;
}

HerglotzRep HerglotzRep::scaled_shifted(double c2, double a) const {
  if (!(c2 > 0.0)) throw error("HerglotzRep::scaled_shifted: c2 must be > 0");
  std::vector<HerglotzAtom> as = atoms_;
  for (auto& at : as) at.w *= c2;
  HerglotzRep out;
  out.shift_ = c2 * shift_ + a;
  out.atoms_ = std::move(as);
  return out;
}

cplx herglotz_eval(const HerglotzRep& rep, cplx lambda) {
  if (!(lambda.imag() > 0.0))
    throw not_upper_half_plane("herglotz_eval: Im lambda must be > 0");
  cplx s = rep.shift();
  for (const auto& a : rep.atoms()) {
    if (a.t.is_infinity()) {
      s += a.w * lambda;
    } else {
      const double t = a.t.value().real();
      s += a.w * (1.0 + t * lambda) / (t - lambda);
    }
  }
  return s;
}

std::vector<std::pair<double, double>> rotation_form(const HerglotzRep& rep) {
  if (rep.shift() != 0.0)
    throw nonzero_shift("rotation_form: representation has a nonzero shift");
  std::vector<std::pair<double, double>> out;
  out.reserve(rep.atoms().size());
  for (const auto& a : rep.atoms()) {
    double theta = 0.0;
    if (!a.t.is_infinity()) {
      // (1+t lambda)/(t-lambda) = R_theta . lambda with (cos, sin) along
      // (t, -1); reduce to [0, pi) in PSO(2).
      const double t = a.t.value().real();
      theta = std::atan2(-1.0, t);
      while (theta < 0.0) theta += std::numbers::pi;
      while (theta >= std::numbers::pi) theta -= std::numbers::pi;
    }
    out.emplace_back(theta, a.w);
  }
  return out;
}

RiemannPoint rotation_atom_location(double theta) {
  const double pi = std::numbers::pi;
  double th = std::fmod(theta, pi);
  if (th < 0.0) th += pi;
  if (th == 0.0) return RiemannPoint::infinity();
  return RiemannPoint(-std::cos(th) / std::sin(th));
}

std::vector<cplx> taylor_at_i(const HerglotzRep& rep, int N) {
  if (!rep.normalized())
    throw not_normalized("taylor_at_i: needs mass = 1 and shift = 0");
  std::vector<cplx> f(static_cast<std::size_t>(N), 0.0);
  for (const auto& a : rep.atoms()) {
    if (a.t.is_infinity()) {
      // Kernel lambda: contributes 1 to f_1 only.
      if (N >= 1) f[0] += a.w;
      continue;
    }
    const double t = a.t.value().real();
    const cplx den = cplx(t, -1.0);            // t - i
    cplx term = (1.0 + t * t) / (den * den);   // n = 1 value
    for (int n = 1; n <= N; ++n) {
      f[static_cast<std::size_t>(n - 1)] += a.w * term;
      term /= den;
    }
  }
  return f;
}

cplx disk_coeff_transform(const std::vector<cplx>& a_seq, int N) {
  if (N < 1) throw error("disk_coeff_transform: N must be >= 1");
  if (static_cast<int>(a_seq.size()) < N)
    throw insufficient_coefficients(
        "disk_coeff_transform: need at least N coefficients");
  cplx b = 0.0;
  cplx pw = 2.0 * iu;   // (2i)^n
  double binom = 1.0;   // binom(N-1, n-1)
  for (int n = 1; n <= N; ++n) {
    b += pw * a_seq[static_cast<std::size_t>(n - 1)] * binom;
    pw *= 2.0 * iu;
    binom *= static_cast<double>(N - n) / static_cast<double>(n);
  }
  return b;
}

std::vector<cplx> distance_grid() {
  std::vector<cplx> g;
  g.reserve(kDistanceGridSize);
  for (int k = 0; k < kDistanceGridSize; ++k) {
    const double th = 2.0 * std::numbers::pi * k / kDistanceGridSize;
    g.push_back(cplx(std::cos(th), 2.0 + std::sin(th)));
  }
  return g;
}

std::vector<RiemannPoint> sample_on_distance_grid(
    const std::function<RiemannPoint(cplx)>& f) {
  std::vector<RiemannPoint> out;
  out.reserve(kDistanceGridSize);
  for (const cplx& z : distance_grid()) out.push_back(f(z));
  return out;
}

double herglotz_distance(const std::vector<RiemannPoint>& f_samples,
                         const std::vector<RiemannPoint>& g_samples) {
  if (f_samples.size() != g_samples.size() || f_samples.empty())
    throw grid_mismatch("herglotz_distance: samples on different grids");
  double d = 0.0;
  for (std::size_t k = 0; k < f_samples.size(); ++k)
    d = std::max(d, chordal(f_samples[k], g_samples[k]));
  return d;
}

}  // namespace dircan
