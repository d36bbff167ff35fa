#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "geoeig/diagonal.hpp"
#include "geoeig/geo_matrix.hpp"
#include "geoeig/preconditioners.hpp"
#include "geoeig/trajectory.hpp"

namespace geoeig {

// Centralized reference iterations. The kernels are templated on the scalar
// type so that real problems (real matrix, real start vector) can run in
// double arithmetic; for real data both instantiations produce identical
// values because every complex operation reduces to the real one.

template <class T>
inline constexpr bool is_supported_scalar = std::is_same_v<T, double> || std::is_same_v<T, cplx>;

namespace detail {

template <class T>
T narrow(cplx v) {
  if constexpr (std::is_same_v<T, double>) {
    if (v.imag() != 0.0) throw invalid_input("complex value in a real kernel");
    return v.real();
  } else {
    return v;
  }
}

template <class T>
double abs2(T v) {
  if constexpr (std::is_same_v<T, double>) return v * v;
  else return std::norm(v);
}

}  // namespace detail

template <class T>
double norm2(std::span<const T> x) {
  double s = 0.0;
  for (const T& v : x) s += detail::abs2(v);
  return std::sqrt(s);
}

template <class T>
double norm2(const std::vector<T>& x) {
  return norm2(std::span<const T>(x));
}

// Compressed sparse rows with summation in ascending column order.
template <class T>
struct Csr {
  static_assert(is_supported_scalar<T>);
  std::vector<std::size_t> ptr{0};
  std::vector<vertex> idx;
  std::vector<T> val;

  std::size_t size() const { return ptr.size() - 1; }

  void push_row(std::span<const Entry> row, auto&& transform) {
    for (const auto& e : row) {
      idx.push_back(e.index);
      val.push_back(detail::narrow<T>(transform(e.value)));
    }
    ptr.push_back(idx.size());
  }

  void apply(std::span<const T> x, std::span<T> y) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      T s{};
      for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) s += val[k] * x[idx[k]];
      y[i] = s;
    }
  }
};

template <class T>
Csr<T> to_csr(const GeoMatrix& a) {
  Csr<T> out;
  for (vertex i = 0; i < a.size(); ++i) out.push_row(a.row(i), [](cplx v) { return v; });
  return out;
}

// Row i holds q_i^{-2} conj(A(j, i)): the matrix Q^-2 A*.
template <class T>
Csr<T> preconditioned_adjoint(const GeoMatrix& a, const DiagonalMatrix& q) {
  Csr<T> out;
  for (vertex i = 0; i < a.size(); ++i) {
    const double s = inverse_square(q[i]);
    out.push_row(a.col(i), [s](cplx v) { return s * std::conj(v); });
  }
  return out;
}

// Row i holds q_i^{-1} A(i, j): the matrix Q^-1 A.
template <class T>
Csr<T> preconditioned_rows(const GeoMatrix& a, const DiagonalMatrix& q) {
  Csr<T> out;
  for (vertex i = 0; i < a.size(); ++i) {
    const double s = inverse(q[i]);
    out.push_row(a.row(i), [s](cplx v) { return s * v; });
  }
  return out;
}

// In-place step of x_{n+1} = (I - Q^-2 A* A) x_n. After a step, residual()
// holds A x_n for the iterate that was consumed.
template <class T>
class PgdaStep {
 public:
  PgdaStep(const GeoMatrix& a, const DiagonalMatrix& q)
      : a_(to_csr<T>(a)), adj_(preconditioned_adjoint<T>(a, q.require_nonsingular(a.size()))),
        ax_(a.size()), z_(a.size()) {}

  void operator()(std::span<T> x) {
    a_.apply(x, ax_);
    adj_.apply(ax_, z_);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= z_[i];
  }

  const std::vector<T>& residual() const { return ax_; }
  void residual_of(std::span<const T> x, std::span<T> out) const { a_.apply(x, out); }

 private:
  Csr<T> a_, adj_;
  std::vector<T> ax_, z_;
};

// In-place step of x_{n+1} = (I - Qsym^-1 A) x_n.
template <class T>
class SpgdaStep {
 public:
  SpgdaStep(const GeoMatrix& a, const DiagonalMatrix& q_sym)
      : a_(to_csr<T>(a)), scaled_(preconditioned_rows<T>(a, q_sym.require_nonsingular(a.size()))),
        ax_(a.size()), z_(a.size()) {}

  void operator()(std::span<T> x) {
    a_.apply(x, ax_);
    scaled_.apply(x, z_);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= z_[i];
  }

  const std::vector<T>& residual() const { return ax_; }
  void residual_of(std::span<const T> x, std::span<T> out) const { a_.apply(x, out); }

 private:
  Csr<T> a_, scaled_;
  std::vector<T> ax_, z_;
};

// Unpreconditioned gradient iteration x_{n+1} = x_n - step A*(A x_n).
template <class T>
class GradientStep {
 public:
  GradientStep(const GeoMatrix& a, double step)
      : a_(to_csr<T>(a)), adj_(to_csr<T>(hermitian_transpose(a))), step_(step), ax_(a.size()), z_(a.size()) {}

  void operator()(std::span<T> x) {
    a_.apply(x, ax_);
    adj_.apply(ax_, z_);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= step_ * z_[i];
  }

  const std::vector<T>& residual() const { return ax_; }

 private:
  Csr<T> a_, adj_;
  double step_;
  std::vector<T> ax_, z_;
};

// Below this norm an iterate is treated as vanished.
inline constexpr double breakdown_norm = 1e-30;

// In-place step of x_{n+1} = H x_n / ||H x_n||_2. residual() holds H x_n.
template <class T>
class PowerStep {
 public:
  explicit PowerStep(const GeoMatrix& h) : h_(to_csr<T>(h)), hx_(h.size()) {}

  // Returns false (leaving x untouched) when ||H x|| < breakdown_norm.
  bool operator()(std::span<T> x) {
    h_.apply(x, hx_);
    const double nrm = norm2<T>(hx_);
    if (nrm < breakdown_norm) return false;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = hx_[i] / nrm;
    return true;
  }

  const std::vector<T>& residual() const { return hx_; }
  void apply(std::span<const T> x, std::span<T> out) const { h_.apply(x, out); }

 private:
  Csr<T> h_;
  std::vector<T> hx_;
};

namespace detail {

template <class Step>
Trajectory run_steps(const char* name, Step& step, std::span<const cplx> x0, std::size_t iterations,
                     const iterate_observer& observe) {
  Trajectory traj{name, {}, {}, false};
  traj.params.iterations = iterations;
  cvec x(x0.begin(), x0.end());
  auto emit = [&](std::size_t it) {
    if (observe) observe(it, x);
    else traj.iterates.push_back(x);
  };
  emit(0);
  for (std::size_t it = 0; it < iterations; ++it) {
    step(std::span<cplx>(x));
    emit(it + 1);
  }
  return traj;
}

inline void require_length(const GeoMatrix& a, std::size_t len) {
  if (len != a.size()) throw dimension_mismatch("vector length differs from matrix order");
}

}  // namespace detail

// x_{n+1} = (I - Q^-2 A* A) x_n. Row sums use the same ascending order and the
// same prescaled adjoint entries as the vertex-level realization.
inline Trajectory pgda_centralized(const GeoMatrix& a, const DiagonalMatrix& q, std::span<const cplx> x0,
                                   std::size_t iterations, const iterate_observer& observe = {}) {
  detail::require_length(a, x0.size());
  PgdaStep<cplx> step(a, q);
  return detail::run_steps("pgda", step, x0, iterations, observe);
}

// x_{n+1} = (I - Qsym^-1 A) x_n.
inline Trajectory spgda_centralized(const GeoMatrix& a, const DiagonalMatrix& q_sym, std::span<const cplx> x0,
                                    std::size_t iterations, const iterate_observer& observe = {}) {
  detail::require_length(a, x0.size());
  SpgdaStep<cplx> step(a, q_sym);
  return detail::run_steps("spgda", step, x0, iterations, observe);
}

inline Trajectory gradient_descent_centralized(const GeoMatrix& a, double step_size, std::span<const cplx> x0,
                                               std::size_t iterations, const iterate_observer& observe = {}) {
  detail::require_length(a, x0.size());
  GradientStep<cplx> step(a, step_size);
  return detail::run_steps("gradient", step, x0, iterations, observe);
}

// Normalized power iteration. Stops early with `breakdown` set when an
// iterate's image has norm below breakdown_norm.
inline Trajectory power_iteration(const GeoMatrix& h, std::span<const cplx> x0, std::size_t iterations,
                                  const iterate_observer& observe = {}) {
  detail::require_length(h, x0.size());
  if (norm2<cplx>(x0) == 0.0) throw invalid_input("power iteration needs a nonzero initial vector");
  PowerStep<cplx> step(h);
  Trajectory traj{"power", {}, {}, false};
  traj.params.iterations = iterations;
  cvec x(x0.begin(), x0.end());
  auto emit = [&](std::size_t it) {
    if (observe) observe(it, x);
    else traj.iterates.push_back(x);
  };
  emit(0);
  for (std::size_t it = 0; it < iterations; ++it) {
    if (!step(std::span<cplx>(x))) {
      traj.breakdown = true;
      break;
    }
    emit(it + 1);
  }
  return traj;
}

enum class shift_sign {
  matrix_minus_lambda,  // H - lambda I
  lambda_minus_matrix,  // lambda I - H
};

inline GeoMatrix shift_for_eigenvalue(const GeoMatrix& h, cplx lambda,
                                      shift_sign sign = shift_sign::matrix_minus_lambda) {
  const GeoMatrix id = identity(h.graph_handle());
  return sign == shift_sign::matrix_minus_lambda ? combine(1.0, h, -lambda, id) : combine(-1.0, h, lambda, id);
}

enum class extremal { min, max };

// A_1 = H - lambda_min I or A_2 = lambda_max I - H; both are positive
// semidefinite when lambda_ext is the corresponding extreme eigenvalue.
inline GeoMatrix extremal_shift(const GeoMatrix& h, extremal which, double lambda_ext) {
  if (!is_hermitian(h, 1e-12)) throw invalid_input("extremal shift needs a Hermitian matrix");
  return which == extremal::min ? shift_for_eigenvalue(h, lambda_ext, shift_sign::matrix_minus_lambda)
                                : shift_for_eigenvalue(h, lambda_ext, shift_sign::lambda_minus_matrix);
}

}  // namespace geoeig
