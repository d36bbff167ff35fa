#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geoeig/errors.hpp"
#include "geoeig/geo_matrix.hpp"

namespace geoeig {

using dense_matrix = Eigen::MatrixXcd;
using dense_vector = Eigen::VectorXcd;

// Largest dense problem the reference oracle accepts.
inline constexpr std::size_t oracle_max_order = 512;

inline dense_matrix to_dense(const GeoMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  dense_matrix d = dense_matrix::Zero(n, n);
  for (vertex i = 0; i < a.size(); ++i)
    for (const auto& e : a.row(i)) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.index)) = e.value;
  return d;
}

inline dense_vector to_dense(std::span<const cplx> x) {
  dense_vector v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v(static_cast<Eigen::Index>(i)) = x[i];
  return v;
}

inline cvec from_dense(const dense_vector& v) { return cvec(v.data(), v.data() + v.size()); }

// Eigenpairs of a Hermitian matrix, ascending eigenvalues, orthonormal
// eigenvectors stored as the columns of `vectors`.
struct EigenDecomposition {
  std::vector<double> values;
  dense_matrix vectors;

  std::size_t size() const { return values.size(); }
  dense_vector vector(std::size_t k) const { return vectors.col(static_cast<Eigen::Index>(k)); }
};

inline double hermitian_defect(const dense_matrix& b) { return (b - b.adjoint()).cwiseAbs().maxCoeff(); }

// Reference eigensolver for oracle-scale Hermitian matrices (Householder
// tridiagonalization + implicit QL via Eigen's SelfAdjointEigenSolver).
// Rejects inputs that are not Hermitian within 1e-12 (relative to the
// largest entry when that exceeds one).
inline EigenDecomposition dense_hermitian_eig(const dense_matrix& b) {
  if (b.rows() != b.cols()) throw dimension_mismatch("eigensolver needs a square matrix");
  if (static_cast<std::size_t>(b.rows()) > oracle_max_order)
    throw invalid_input("matrix exceeds the dense oracle order limit");
  if (b.size() > 0) {
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (hermitian_defect(b) > 1e-12 * scale) throw invalid_input("matrix is not Hermitian");
  }
  const dense_matrix sym = 0.5 * (b + b.adjoint());
  Eigen::SelfAdjointEigenSolver<dense_matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw invalid_input("eigensolver did not converge");
  EigenDecomposition out;
  out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  out.vectors = solver.eigenvectors();
  return out;
}

inline EigenDecomposition dense_hermitian_eig(const GeoMatrix& a) { return dense_hermitian_eig(to_dense(a)); }

struct EigenResiduals {
  double max_residual;       // max_k ||B u_k - g_k u_k||_2
  double max_orthogonality;  // max_{k,l} |<u_k, u_l> - delta_kl|
  double reconstruction;     // max_{i,j} |(U G U*)(i,j) - B(i,j)|
};

inline EigenResiduals eigen_residuals(const dense_matrix& b, const EigenDecomposition& e) {
  EigenResiduals r{0.0, 0.0, 0.0};
  const auto n = static_cast<Eigen::Index>(e.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const dense_vector u = e.vectors.col(k);
    r.max_residual = std::max(r.max_residual, (b * u - e.values[static_cast<std::size_t>(k)] * u).norm());
  }
  const dense_matrix gram = e.vectors.adjoint() * e.vectors;
  r.max_orthogonality = (gram - dense_matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  Eigen::VectorXd g(n);
  for (Eigen::Index k = 0; k < n; ++k) g(k) = e.values[static_cast<std::size_t>(k)];
  const dense_matrix rebuilt = e.vectors * g.cast<cplx>().asDiagonal() * e.vectors.adjoint();
  r.reconstruction = (rebuilt - b).cwiseAbs().maxCoeff();
  return r;
}

// 2-norm of a Hermitian matrix from its spectrum.
inline double spectral_norm(const EigenDecomposition& e) {
  double m = 0.0;
  for (double v : e.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace geoeig
