#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "dircan/herglotz.hpp"
#include "dircan/sphere.hpp"

namespace dtest {

using dircan::cplx;
using dircan::HerglotzAtom;
using dircan::HerglotzRep;
using dircan::RiemannPoint;

struct test_rng {
  std::mt19937 gen;
  explicit test_rng(unsigned seed) : gen(seed) {}

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(gen);
  }
  int integer(int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(gen);
  }
  cplx upper_z(double im_min = 0.5, double im_max = 3.0, double re_max = 2.0) {
    return {uniform(-re_max, re_max), uniform(im_min, im_max)};
  }
  // Distinct rotation angles in [0, pi) with normalized weights.
  std::vector<std::pair<double, double>> combination(int min_atoms = 2,
                                                     int max_atoms = 5) {
    const int n = integer(min_atoms, max_atoms);
    std::vector<std::pair<double, double>> atoms;
    double mass = 0.0;
    for (int k = 0; k < n; ++k) {
      double th;
      bool fresh;
      do {
        th = uniform(0.0, std::numbers::pi - 1e-3);
        fresh = true;
        for (auto& [t0, w0] : atoms) fresh = fresh && std::abs(t0 - th) > 1e-3;
      } while (!fresh);
      const double w = uniform(0.2, 1.0);
      atoms.emplace_back(th, w);
      mass += w;
    }
    for (auto& [t0, w0] : atoms) w0 /= mass;
    // Renormalize exactly: put the rounding slack on the last weight.
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < atoms.size(); ++k) s += atoms[k].second;
    atoms.back().second = 1.0 - s;
    return atoms;
  }
  HerglotzRep normalized_rep(int min_atoms = 2, int max_atoms = 5) {
    std::vector<HerglotzAtom> as;
    for (auto& [th, w] : combination(min_atoms, max_atoms))
      as.push_back({dircan::rotation_atom_location(th), w});
    return HerglotzRep(0.0, std::move(as));
  }
};

// Test-side Taylor oracle: plain trapezoid Cauchy sums, written independently
// of the library's quadrature helper.
inline std::vector<cplx> oracle_taylor(const std::function<cplx(cplx)>& f,
                                       cplx center, double radius, int N,
                                       int nodes = 96) {
  std::vector<cplx> c(static_cast<std::size_t>(N) + 1, 0.0);
  for (int k = 0; k < nodes; ++k) {
    const double th = 2.0 * std::numbers::pi * k / nodes;
    const cplx w = std::polar(radius, th);
    const cplx v = f(center + w);
    for (int n = 0; n <= N; ++n)
      c[static_cast<std::size_t>(n)] += v * std::polar(1.0, -n * th);
  }
  for (int n = 0; n <= N; ++n)
    c[static_cast<std::size_t>(n)] /= nodes * std::pow(radius, n);
  return c;
}

// Truncated power series (constant term first) for composition oracles.
struct poly {
  std::vector<cplx> c;
  explicit poly(std::size_t len) : c(len, 0.0) {}
  static poly mul(const poly& a, const poly& b) {
    poly r(a.c.size());
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; i + j < a.c.size() && j < b.c.size(); ++j)
        r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
};

inline double cd(cplx a, cplx b) { return dircan::chordal(a, b); }

}  // namespace dtest
