#pragma once

#include <vector>

#include "dircan/reflectionless.hpp"

namespace dircan {

// ---------------------------------------------------------------------------
// Expansion coefficients of m at infinity in the two charts:
//   h chart:  F(i + h) = i + sum f_n h^n          (|h| < 1)
//   w chart:  m_+(-1/w) = i + sum g_n(t) w^n      (|w| < r)
// with |f_n| <= 1 when F(i) = i and |g_n| <= (3/r)^n.
// ---------------------------------------------------------------------------
struct SeriesAtInfinity {
  enum class chart_tag { h_chart, w_chart };
  chart_tag chart;
  std::vector<cplx> coeffs;  // coeffs[k] holds the coefficient of index k+1
  double radius = 1.0;

  int count() const { return static_cast<int>(coeffs.size()); }
  cplx coeff(int n) const {
    if (n < 1 || n > count())
      throw insufficient_coefficients("SeriesAtInfinity: index out of range");
    return coeffs[static_cast<std::size_t>(n - 1)];
  }
};

// g coefficients by contour quadrature of g(w) = M(-1/w) - i on the circle
// |w| = r_hint / 2 (128 half-offset nodes, so no node is real).  Throws
// radius_too_large when the sampled spectrum does not decay.
SeriesAtInfinity g_from_F(const FFunction& f, int N, double r_hint = 1.0);

// f coefficients: directly from the kernel formula for normalized atomic
// data, otherwise by contour quadrature around i (radius 1/4, 128 nodes).
// Requires F(i) = i.
SeriesAtInfinity f_from_F(const FFunction& f, int N);

// max_n |c_n| / (3/r)^n for a w-chart series: must stay <= 1 for data
// satisfying the analyticity hypothesis with radius r.
double envelope_ratio(const SeriesAtInfinity& s);

// Right side of g_n' = sum_{j=1}^n g_j g_{n+1-j} - 2 q g_n + 2 i g_{n+1}.
// (The momentum p enters only the order-zero relation g_1 = q + i p, not the
// evolution of the coefficients.)
cplx g_evolution_rhs(const std::vector<cplx>& g, double q, int n);

// Right side of the h-chart evolution
//   f_n' = -sum_{j=1}^n f_j f_{n+1-j}
//          + sum_{k=0}^{n-2} (i/2)^{k+1} sum_{j=1}^{n-1-k} f_j f_{n-k-j}
//          - 2 q f_n - 2 i f_{n+1} - sum_{k=0}^{n-1} (i/2)^k f_{n-k},
// with the empty-sum convention at n = 1.
cplx f_evolution_rhs(const std::vector<cplx>& f, double q, int n);

// ---------------------------------------------------------------------------
// Derivative cascade h_n(N) = g_n^{(N)}/N!, filled in triangular order from
// h_n(0) = g_n by
//   (N+1) h_n(N+1) = sum_{d<=N} sum_{j<=n} h_j(d) h_{n+1-j}(N-d)
//                    - 2 sum_{d<=N} Re h_1(d) . h_n(N-d) + 2 i h_{n+1}(N),
// which consumes one n index per N step (hence n_max >= N_max + 1).
// ---------------------------------------------------------------------------
struct CoeffTable {
  int n_max = 0;
  int N_max = 0;
  std::vector<std::vector<cplx>> rows;  // rows[n-1][N], N <= min(N_max, n_max-n)

  bool in_range(int n, int N) const {
    return n >= 1 && n <= n_max && N >= 0 &&
           N < static_cast<int>(rows[static_cast<std::size_t>(n - 1)].size());
  }
  cplx at(int n, int N) const {
    if (!in_range(n, N))
      throw insufficient_depth("CoeffTable: index outside the triangle");
    return rows[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(N)];
  }
};

CoeffTable derivative_cascade(const std::vector<cplx>& g0, int N_max);

// ---------------------------------------------------------------------------
// Majorant tables.  A is the direct recursion
//   (N+1) A_n(N+1) = sum sum A_j(d) A_{n+1-j}(N-d)
//                    + 2 sum A_1(d) A_n(N-d) + 2 A_{n+1}(N),
// B the dominating one
//   (N+1) B_n(N+1) = 3 sum sum B_j(d) B_{n+1-j}(N-d) + 2 n B_{n+1}(N),
// both seeded with (3/r)^n; A <= B entrywise, and B has the closed form
// B_n(N) = 3^n 15^N binom(N+n-1, N) / r^{n+N} (the coefficients of
// 3/(r - 3w - 15t)).
// ---------------------------------------------------------------------------
struct BoundTable {
  double r = 1.0;
  int n_max = 0;
  int N_max = 0;
  std::vector<std::vector<double>> A, B;  // [n-1][N], full rectangle

  double a(int n, int N) const {
    return A[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(N)];
  }
  double b(int n, int N) const {
    return B[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(N)];
  }
};

// Floating-point tables with upward rounding (these are bounds; rounding must
// not understate them).
BoundTable bound_tables(double r, int n_max, int N_max);

// Closed-form solution coefficients C_n(N) of the majorant Cauchy problem
// dY/dt = 3 Y^2 + 2 dY/dw, Y(w, 0) = 3/(r - 3w); equals B_n(N).
double cauchy_coeffs(double r, int n, int N);

// ---------------------------------------------------------------------------
// Exact arithmetic for the tables.  The r-scaled values B_n(N) r^{n+N} are
// r-free, so the exact path works over rationals independent of r.
// ---------------------------------------------------------------------------
struct rational {
  __int128 num = 0;
  __int128 den = 1;

  rational() = default;
  rational(long long v) : num(v), den(1) {}
  static rational make(__int128 n, __int128 d);

  rational operator+(const rational& o) const;
  rational operator*(const rational& o) const;
  rational div_int(long long k) const;
  bool operator==(const rational& o) const {
    return num == o.num && den == o.den;
  }
  bool operator<=(const rational& o) const;
  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

struct exact_bound_tables {
  int span = 0;
  // Scaled values A_n(N) r^{n+N}, B_n(N) r^{n+N} on the triangle n + N <= span:
  // A[n-1][N] for N <= span - n.
  std::vector<std::vector<rational>> A, B;
};

// Exact tables on the triangle n + N <= span; requires span <= 20 (128-bit
// overflow guard).
exact_bound_tables bound_tables_scaled_exact(int span);

// Exact C_n(N) r^{n+N} by series extraction from 3/(r - 3w - 15t).
rational cauchy_coeffs_scaled_exact(int n, int N);

}  // namespace dircan
