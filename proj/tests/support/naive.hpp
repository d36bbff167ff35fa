#pragma once

// Test-only reference arithmetic on dense row-major matrices. Nothing here
// calls into the library beyond reading matrix entries, so results serve as
// an independent oracle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <deque>
#include <vector>

#include "geoeig/geo_matrix.hpp"
#include "geoeig/graph.hpp"

namespace naive {

using cplx = std::complex<double>;

struct Dense {
  std::size_t n = 0;
  std::vector<cplx> v;

  Dense() = default;
  explicit Dense(std::size_t order) : n(order), v(order * order) {}
  cplx& operator()(std::size_t i, std::size_t j) { return v[i * n + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return v[i * n + j]; }
};

inline Dense from(const geoeig::GeoMatrix& a) {
  Dense d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) d(i, j) = a.at(i, j);
  return d;
}

inline Dense identity(std::size_t n) {
  Dense d(n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = 1.0;
  return d;
}

inline Dense mul(const Dense& a, const Dense& b) {
  Dense c(a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t k = 0; k < a.n; ++k)
      for (std::size_t j = 0; j < a.n; ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

inline Dense add(const Dense& a, const Dense& b, cplx beta = 1.0) {
  Dense c(a.n);
  for (std::size_t k = 0; k < a.v.size(); ++k) c.v[k] = a.v[k] + beta * b.v[k];
  return c;
}

inline Dense adjoint(const Dense& a) {
  Dense c(a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) c(i, j) = std::conj(a(j, i));
  return c;
}

inline std::vector<cplx> apply(const Dense& a, const std::vector<cplx>& x) {
  std::vector<cplx> y(a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline double norm(const std::vector<cplx>& x) {
  double s = 0.0;
  for (auto v : x) s += std::norm(v);
  return std::sqrt(s);
}

inline double max_abs(const Dense& a) {
  double m = 0.0;
  for (auto v : a.v) m = std::max(m, std::abs(v));
  return m;
}

// Hop distances by breadth-first search over an explicit edge test.
inline std::vector<std::vector<std::size_t>> all_hops(const geoeig::Graph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, SIZE_MAX));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> q{s};
    d[s][s] = 0;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop_front();
      for (auto w : g.neighbors(u))
        if (d[s][w] == SIZE_MAX) {
          d[s][w] = d[s][u] + 1;
          q.push_back(w);
        }
    }
  }
  return d;
}

// Smallest s with a(i,j) = 0 whenever hops(i,j) > s.
inline std::size_t width(const Dense& a, const geoeig::Graph& g) {
  const auto d = all_hops(g);
  std::size_t w = 0;
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j)
      if (a(i, j) != cplx{}) w = std::max(w, d[i][j]);
  return w;
}

// Eigenvalues (ascending) and column eigenvectors of a Hermitian matrix by
// cyclic complex Jacobi rotations until the off-diagonal Frobenius norm
// drops below tol.
struct Eig {
  std::vector<double> values;
  Dense vectors;
};

inline Eig jacobi(Dense a, double tol = 1e-13, int max_sweeps = 100) {
  const std::size_t n = a.n;
  Dense v = identity(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        if (p != q) off += std::norm(a(p, q));
    if (std::sqrt(off) < tol) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const cplx phase = apq / mag;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
        const double c = std::cos(theta), s = std::sin(theta);
        // Rotation J with columns p, q: [c, s conj(phase)... ] chosen to zero a(p,q).
        const cplx jpp = c, jqp = -s * std::conj(phase), jpq = s * phase, jqq = c;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x).real() < a(y, y).real(); });
  Eig out{std::vector<double>(n), Dense(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace naive
