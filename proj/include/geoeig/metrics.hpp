#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "geoeig/geo_matrix.hpp"
#include "geoeig/solvers.hpp"
#include "geoeig/trajectory.hpp"

namespace geoeig {

// log10 values are clamped to this magnitude; exact zeros map to -16.
inline constexpr double log_clamp = 16.0;

inline double clamped_log10(double v) {
  if (v <= 0.0) return -log_clamp;
  return std::clamp(std::log10(v), -log_clamp, log_clamp);
}

namespace detail {

template <class T>
cplx as_complex(T v) {
  return cplx(v);
}

}  // namespace detail

// <x, u> = sum_i x_i conj(u_i).
template <class T, class U>
cplx inner(std::span<const T> x, std::span<const U> u) {
  cplx s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += detail::as_complex(x[i]) * std::conj(detail::as_complex(u[i]));
  return s;
}

// ||x/||x|| - alpha u/||u|| ||_2 with the unimodular alpha maximizing
// Re <x, alpha u>. Both norms must be positive.
template <class T>
double aligned_distance(std::span<const T> x, std::span<const cplx> u) {
  const double nx = norm2<T>(x);
  const double nu = norm2<cplx>(u);
  const cplx ip = inner<T, cplx>(x, u);
  const double mag = std::abs(ip);
  const cplx alpha = mag > 0.0 ? ip / mag : cplx(1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(detail::as_complex(x[i]) / nx - alpha * u[i] / nu);
  return std::sqrt(s);
}

// |<x, u>| / (||x|| ||u||).
template <class T>
double aligned_cosine(std::span<const T> x, std::span<const cplx> u) {
  return std::abs(inner<T, cplx>(x, u)) / (norm2<T>(x) * norm2<cplx>(u));
}

struct MetricPoint {
  std::size_t n = 0;
  double ce = std::numeric_limits<double>::quiet_NaN();
  double nr = std::numeric_limits<double>::quiet_NaN();
  bool vanished = false;  // ||x_n|| below breakdown_norm: both values undefined
};

// CE and NR of one iterate given its image A x under the shifted matrix.
// CE is NaN when the reference u vanishes.
template <class T>
MetricPoint metric_point(std::size_t n, std::span<const T> x, std::span<const T> ax, std::span<const cplx> u,
                         bool u_defined) {
  MetricPoint p;
  p.n = n;
  const double nx = norm2<T>(x);
  if (!(nx > breakdown_norm)) {
    p.vanished = true;
    return p;
  }
  p.nr = clamped_log10(norm2<T>(ax) / nx);
  if (u_defined) p.ce = clamped_log10(aligned_distance<T>(x, u));
  return p;
}

// Per-iterate convergence error log10 ||x~_n - u~||_2 (phase aligned) and
// normalized residue log10 ||A x~_n||_2.
inline std::vector<MetricPoint> metrics_ce_nr(const Trajectory& traj, std::span<const cplx> u, const GeoMatrix& a) {
  const bool u_defined = norm2<cplx>(u) > breakdown_norm;
  std::vector<MetricPoint> out;
  out.reserve(traj.size());
  cvec ax(a.size());
  for (std::size_t n = 0; n < traj.size(); ++n) {
    matvec(a, traj[n], ax);
    out.push_back(metric_point<cplx>(n, traj[n], ax, u, u_defined));
  }
  return out;
}

}  // namespace geoeig
