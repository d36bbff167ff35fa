#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "geoeig/dense_eig.hpp"
#include "geoeig/diagonal.hpp"
#include "geoeig/geo_matrix.hpp"
#include "geoeig/trajectory.hpp"

namespace geoeig {

// Eigenvalues of the iteration matrix above this threshold count as one.
inline constexpr double unit_eigenvalue_threshold = 1.0 - 1e-9;

// Limit of a preconditioned iteration written as W x_{n+1} = B W x_n with a
// positive diagonal weight W and Hermitian B whose spectrum lies in [0, 1]:
//
//   u = sum_{g_k = 1} <W x_0, u_k> W^-1 u_k,   r = max_{g_k < 1} g_k,
//
// so that ||W (x_n - u)||_2 <= ||W x_0||_2 r^n.
struct IterationLimit {
  cvec u;
  double rate = 0.0;
  std::vector<double> weights;   // diagonal of W
  std::vector<double> spectrum;  // eigenvalues of B, ascending
};

// B = I - Q^-1 A* A Q^-1 for the iteration x_{n+1} = (I - Q^-2 A* A) x_n.
inline dense_matrix pgda_iteration_matrix(const GeoMatrix& a, const DiagonalMatrix& q) {
  q.require_nonsingular(a.size());
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::VectorXd qinv(n);
  for (Eigen::Index i = 0; i < n; ++i) qinv(i) = 1.0 / q[static_cast<std::size_t>(i)];
  const dense_matrix c = to_dense(a) * qinv.cast<cplx>().asDiagonal();
  dense_matrix b = dense_matrix::Identity(n, n) - c.adjoint() * c;
  return 0.5 * (b + b.adjoint());
}

// B = I - Qsym^-1/2 A Qsym^-1/2 for x_{n+1} = (I - Qsym^-1 A) x_n.
inline dense_matrix spgda_iteration_matrix(const GeoMatrix& a, const DiagonalMatrix& q_sym) {
  q_sym.require_nonsingular(a.size());
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = 1.0 / std::sqrt(q_sym[static_cast<std::size_t>(i)]);
  const auto d = s.cast<cplx>().asDiagonal();
  return dense_matrix::Identity(n, n) - d * to_dense(a) * d;
}

namespace detail {

inline IterationLimit limit_from(const dense_matrix& b, std::vector<double> weights, std::span<const cplx> x0) {
  const auto eig = dense_hermitian_eig(b);
  const auto n = static_cast<Eigen::Index>(weights.size());
  dense_vector wx0(n);
  for (Eigen::Index i = 0; i < n; ++i) wx0(i) = weights[static_cast<std::size_t>(i)] * x0[static_cast<std::size_t>(i)];
  dense_vector u = dense_vector::Zero(n);
  double rate = 0.0;
  for (std::size_t k = 0; k < eig.size(); ++k) {
    const double g = eig.values[k];
    if (g > unit_eigenvalue_threshold) {
      const dense_vector uk = eig.vector(k);
      u += uk.dot(wx0) * uk;  // <W x0, u_k> u_k; Eigen's dot conjugates its left operand
    } else {
      rate = std::max(rate, g);
    }
  }
  IterationLimit out;
  out.u.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.u[static_cast<std::size_t>(i)] = u(i) / weights[static_cast<std::size_t>(i)];
  out.rate = rate;
  out.weights = std::move(weights);
  out.spectrum = eig.values;
  return out;
}

}  // namespace detail

// Limit and rate of x_{n+1} = (I - Q^-2 A* A) x_n (weight W = Q).
inline IterationLimit theorem1_limit(const GeoMatrix& a, const DiagonalMatrix& q, std::span<const cplx> x0) {
  if (x0.size() != a.size()) throw dimension_mismatch("x0 length differs from matrix order");
  return detail::limit_from(pgda_iteration_matrix(a, q), std::vector<double>(q.values().begin(), q.values().end()),
                            x0);
}

// Limit and rate of x_{n+1} = (I - Qsym^-1 A) x_n (weight W = Qsym^1/2).
inline IterationLimit theorem2_limit(const GeoMatrix& a, const DiagonalMatrix& q_sym, std::span<const cplx> x0) {
  if (x0.size() != a.size()) throw dimension_mismatch("x0 length differs from matrix order");
  std::vector<double> w(q_sym.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sqrt(q_sym[i]);
  return detail::limit_from(spgda_iteration_matrix(a, q_sym), std::move(w), x0);
}

struct RateBoundReport {
  bool holds = true;
  double worst_margin = 0.0;  // min over n of bound - ||W (x_n - u)||; negative when violated
  std::size_t worst_n = 0;
};

// Checks ||W (x_n - u)||_2 <= ||W x_0||_2 r^n (1 + 1e-9) + 1e-12 for every
// recorded iterate.
inline RateBoundReport rate_bound_check(const Trajectory& traj, const IterationLimit& lim) {
  RateBoundReport rep;
  if (traj.size() == 0) return rep;
  auto weighted_norm = [&](auto&& value_at) {
    double s = 0.0;
    for (std::size_t i = 0; i < lim.weights.size(); ++i) s += std::norm(lim.weights[i] * value_at(i));
    return std::sqrt(s);
  };
  const cvec& x0 = traj[0];
  if (x0.size() != lim.weights.size()) throw dimension_mismatch("trajectory length differs from limit");
  const double w0 = weighted_norm([&](std::size_t i) { return x0[i]; });
  rep.worst_margin = INFINITY;
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const cvec& x = traj[n];
    const double lhs = weighted_norm([&](std::size_t i) { return x[i] - lim.u[i]; });
    const double rhs = w0 * std::pow(lim.rate, static_cast<double>(n)) * (1.0 + 1e-9) + 1e-12;
    const double margin = rhs - lhs;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_n = n;
    }
    if (margin < 0.0) rep.holds = false;
  }
  return rep;
}

inline RateBoundReport rate_bound_check(const Trajectory& traj, const GeoMatrix& a, const DiagonalMatrix& q) {
  if (traj.size() == 0) return {};
  return rate_bound_check(traj, theorem1_limit(a, q, traj[0]));
}

}  // namespace geoeig
