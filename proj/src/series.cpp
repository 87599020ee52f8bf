#include "dircan/series.hpp"

#include <algorithm>
#include <cmath>

#include "dircan/quadrature.hpp"

namespace dircan {

// ---------------------------------------------------------------------------
// Coefficient extraction
// ---------------------------------------------------------------------------

SeriesAtInfinity g_from_F(const FFunction& f, int N, double r_hint) {
  if (N < 1) throw error("g_from_F: N must be >= 1");
  if (!(r_hint > 0.0)) throw error("g_from_F: r_hint must be > 0");
  const double rq = 0.5 * r_hint;
  const FFunction fc = f;
  auto gfun = [&fc](cplx w) -> cplx {
    const RiemannPoint m = M_from_F(fc, RiemannPoint(-1.0 / w));
    if (m.is_infinity())
      throw radius_too_large("g_from_F: pole on the quadrature circle");
    return m.value() - iu;
  };
  const auto c = cauchy_taylor(gfun, 0.0, rq, N, 128, /*offset_half=*/true);

  SeriesAtInfinity s;
  s.chart = SeriesAtInfinity::chart_tag::w_chart;
  s.radius = r_hint;
  s.coeffs.assign(c.begin() + 1, c.end());

  // The sampled spectrum |g_n| rq^n must decay if g is analytic past the
  // circle; a flat tail means the quadrature radius encloses a singularity.
  if (N >= 8) {
    double head = 0.0, tail = 0.0;
    for (int n = 1; n <= N; ++n) {
      const double sn = std::abs(s.coeffs[static_cast<std::size_t>(n - 1)]) *
                        std::pow(rq, n);
      if (n <= N / 2) head = std::max(head, sn);
      if (n > (3 * N) / 4) tail = std::max(tail, sn);
    }
    if (head > 1e-12 && tail > 0.3 * head)
      throw radius_too_large("g_from_F: non-decaying quadrature residuals");
  }
  return s;
}

SeriesAtInfinity f_from_F(const FFunction& f, int N) {
  if (N < 1) throw error("f_from_F: N must be >= 1");
  SeriesAtInfinity s;
  s.chart = SeriesAtInfinity::chart_tag::h_chart;
  s.radius = 1.0;
  if (f.has_rep() && f.rep().normalized()) {
    s.coeffs = taylor_at_i(f.rep(), N);
    return s;
  }
  if (std::abs(f.value_at_i() - iu) > 1e-8)
    throw not_normalized("f_from_F: F(i) != i");
  const FFunction fc = f;
  const auto c = cauchy_taylor([&fc](cplx lam) { return fc.eval(lam); }, iu,
                               0.25, N, 128);
  s.coeffs.assign(c.begin() + 1, c.end());
  return s;
}

double envelope_ratio(const SeriesAtInfinity& s) {
  if (s.chart != SeriesAtInfinity::chart_tag::w_chart)
    throw error("envelope_ratio: defined for the w chart");
  double worst = 0.0;
  double env = 1.0;
  for (int n = 1; n <= s.count(); ++n) {
    env *= 3.0 / s.radius;
    worst = std::max(worst, std::abs(s.coeff(n)) / env);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Evolution right-hand sides
// ---------------------------------------------------------------------------

cplx g_evolution_rhs(const std::vector<cplx>& g, double q, int n) {
  if (n < 1) throw error("g_evolution_rhs: n must be >= 1");
  if (static_cast<int>(g.size()) < n + 1)
    throw insufficient_coefficients("g_evolution_rhs: need g_1..g_{n+1}");
  cplx s = 0.0;
  for (int j = 1; j <= n; ++j)
    s += g[static_cast<std::size_t>(j - 1)] *
         g[static_cast<std::size_t>(n - j)];
  s -= 2.0 * q * g[static_cast<std::size_t>(n - 1)];
  s += 2.0 * iu * g[static_cast<std::size_t>(n)];
  return s;
}

cplx f_evolution_rhs(const std::vector<cplx>& f, double q, int n) {
  if (n < 1) throw error("f_evolution_rhs: n must be >= 1");
  if (static_cast<int>(f.size()) < n + 1)
    throw insufficient_coefficients("f_evolution_rhs: need f_1..f_{n+1}");
  auto at = [&f](int j) { return f[static_cast<std::size_t>(j - 1)]; };
  cplx s = 0.0;
  for (int j = 1; j <= n; ++j) s -= at(j) * at(n + 1 - j);
  for (int k = 0; k <= n - 2; ++k) {
    const cplx w = std::pow(0.5 * iu, k + 1);
    cplx inner = 0.0;
    for (int j = 1; j <= n - 1 - k; ++j) inner += at(j) * at(n - k - j);
    s += w * inner;
  }
  s -= 2.0 * q * at(n);
  s -= 2.0 * iu * at(n + 1);
  for (int k = 0; k <= n - 1; ++k) s -= std::pow(0.5 * iu, k) * at(n - k);
  return s;
}

// ---------------------------------------------------------------------------
// Derivative cascade
// ---------------------------------------------------------------------------

CoeffTable derivative_cascade(const std::vector<cplx>& g0, int N_max) {
  const int n_max = static_cast<int>(g0.size());
  if (n_max < 1 || N_max < 0) throw error("derivative_cascade: empty input");
  if (n_max < N_max + 1)
    throw insufficient_depth("derivative_cascade: need n_max >= N_max + 1");

  CoeffTable t;
  t.n_max = n_max;
  t.N_max = N_max;
  t.rows.resize(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const int depth = std::min(N_max, n_max - n);
    t.rows[static_cast<std::size_t>(n - 1)].assign(
        static_cast<std::size_t>(depth) + 1, 0.0);
    t.rows[static_cast<std::size_t>(n - 1)][0] =
        g0[static_cast<std::size_t>(n - 1)];
  }

  auto h = [&t](int n, int N) -> cplx {
    return t.rows[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(N)];
  };
  for (int N = 0; N < N_max; ++N) {
    for (int n = 1; n <= n_max - N - 1; ++n) {
      cplx s = 0.0;
      for (int d = 0; d <= N; ++d)
        for (int j = 1; j <= n; ++j) s += h(j, d) * h(n + 1 - j, N - d);
      for (int d = 0; d <= N; ++d)
        s -= 2.0 * h(1, d).real() * h(n, N - d);  // q^{(d)}/d! = Re h_1(d)
      s += 2.0 * iu * h(n + 1, N);
      t.rows[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(N + 1)] =
          s / static_cast<double>(N + 1);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Bound tables, floating point with upward rounding
// ---------------------------------------------------------------------------

namespace {

double up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

// Triangle n + N <= span of either recursion, seeded with (3/r)^n.
enum class majorant { direct, dominating };

std::vector<std::vector<double>> fill_triangle(double r, int span,
                                               majorant kind) {
  // tri[n-1][N] for n + N <= span.
  std::vector<std::vector<double>> tri(static_cast<std::size_t>(span));
  double seed = 1.0;
  for (int n = 1; n <= span; ++n) {
    seed = up(seed * (3.0 / r));
    tri[static_cast<std::size_t>(n - 1)].assign(
        static_cast<std::size_t>(span - n) + 1, 0.0);
    tri[static_cast<std::size_t>(n - 1)][0] = seed;
  }
  auto at = [&tri](int n, int N) {
    return tri[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(N)];
  };
  for (int N = 0; N < span - 1; ++N) {
    for (int n = 1; n + N + 1 <= span; ++n) {
      double s = 0.0;
      for (int d = 0; d <= N; ++d)
        for (int j = 1; j <= n; ++j)
          s = up(s + up(at(j, d) * at(n + 1 - j, N - d)));
      if (kind == majorant::dominating) {
        s = up(3.0 * s);
        s = up(s + up(2.0 * n * at(n + 1, N)));
      } else {
        for (int d = 0; d <= N; ++d)
          s = up(s + up(2.0 * up(at(1, d) * at(n, N - d))));
        s = up(s + 2.0 * at(n + 1, N));
      }
      tri[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(N + 1)] =
          up(s / (N + 1));
    }
  }
  return tri;
}

}  // namespace

BoundTable bound_tables(double r, int n_max, int N_max) {
  if (!(r > 0.0) || n_max < 1 || N_max < 0)
    throw error("bound_tables: bad arguments");
  if (n_max < N_max + 1)
    throw insufficient_depth("bound_tables: need n_max >= N_max + 1");
  const int span = n_max + N_max;
  const auto ta = fill_triangle(r, span, majorant::direct);
  const auto tb = fill_triangle(r, span, majorant::dominating);

  BoundTable out;
  out.r = r;
  out.n_max = n_max;
  out.N_max = N_max;
  out.A.resize(static_cast<std::size_t>(n_max));
  out.B.resize(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    out.A[static_cast<std::size_t>(n - 1)].assign(
        ta[static_cast<std::size_t>(n - 1)].begin(),
        ta[static_cast<std::size_t>(n - 1)].begin() + N_max + 1);
    out.B[static_cast<std::size_t>(n - 1)].assign(
        tb[static_cast<std::size_t>(n - 1)].begin(),
        tb[static_cast<std::size_t>(n - 1)].begin() + N_max + 1);
  }
  return out;
}

double cauchy_coeffs(double r, int n, int N) {
  if (!(r > 0.0) || n < 1 || N < 0) throw error("cauchy_coeffs: bad arguments");
  // Y(w, t) = 3/(r - 3w - 15t):  C_n(N) = 3^n 15^N binom(N+n-1, N) / r^{n+N}.
  double v = std::pow(3.0 / r, n) * std::pow(15.0 / r, N);
  for (int k = 1; k <= N; ++k)
    v *= static_cast<double>(n - 1 + k) / static_cast<double>(k);
  return v;
}

// ---------------------------------------------------------------------------
// Exact rational path
// ---------------------------------------------------------------------------

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

rational rational::make(__int128 n, __int128 d) {
  if (d == 0) throw error("rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = gcd128(n, d);
  rational r;
  r.num = g == 0 ? 0 : n / g;
  r.den = g == 0 ? 1 : d / g;
  return r;
}

rational rational::operator+(const rational& o) const {
  return make(num * o.den + o.num * den, den * o.den);
}

rational rational::operator*(const rational& o) const {
  return make(num * o.num, den * o.den);
}

rational rational::div_int(long long k) const {
  return make(num, den * static_cast<__int128>(k));
}

bool rational::operator<=(const rational& o) const {
  return num * o.den <= o.num * den;
}

exact_bound_tables bound_tables_scaled_exact(int span) {
  if (span < 1) throw error("bound_tables_scaled_exact: bad arguments");
  if (span > 20)
    throw error("bound_tables_scaled_exact: depth beyond the 128-bit range");

  auto fill = [span](bool dominating) {
    std::vector<std::vector<rational>> tri(static_cast<std::size_t>(span));
    __int128 seed = 1;
    for (int n = 1; n <= span; ++n) {
      seed *= 3;  // scaled seed A_n(0) r^n = 3^n
      tri[static_cast<std::size_t>(n - 1)].assign(
          static_cast<std::size_t>(span - n) + 1, rational(0));
      tri[static_cast<std::size_t>(n - 1)][0] = rational::make(seed, 1);
    }
    auto at = [&tri](int n, int N) {
      return tri[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(N)];
    };
    for (int N = 0; N < span - 1; ++N)
      for (int n = 1; n + N + 1 <= span; ++n) {
        rational s(0);
        for (int d = 0; d <= N; ++d)
          for (int j = 1; j <= n; ++j)
            s = s + at(j, d) * at(n + 1 - j, N - d);
        if (dominating) {
          s = s * rational(3);
          s = s + rational(2 * n) * at(n + 1, N);
        } else {
          for (int d = 0; d <= N; ++d)
            s = s + rational(2) * at(1, d) * at(n, N - d);
          s = s + rational(2) * at(n + 1, N);
        }
        tri[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(N + 1)] =
            s.div_int(N + 1);
      }
    return tri;
  };

  exact_bound_tables out;
  out.span = span;
  out.A = fill(false);
  out.B = fill(true);
  return out;
}

rational cauchy_coeffs_scaled_exact(int n, int N) {
  if (n < 1 || N < 0) throw error("cauchy_coeffs_scaled_exact: bad arguments");
  if (n + N > 20)
    throw error("cauchy_coeffs_scaled_exact: depth beyond the 128-bit range");
  // Series extraction from Y = (3/r) sum_k ((3w + 15t)/r)^k: the w^{n-1} t^N
  // term of ((3w + 15t))^k appears at k = n - 1 + N with multiplicity
  // binom(k, N).
  const int k = n - 1 + N;
  __int128 binom = 1;
  for (int j = 1; j <= N; ++j)
    binom = binom * static_cast<__int128>(k - N + j) / j;
  __int128 v = 3;  // leading 3
  for (int j = 0; j < n - 1; ++j) v *= 3;
  for (int j = 0; j < N; ++j) v *= 15;
  return rational::make(v * binom, 1);
}

}  // namespace dircan
