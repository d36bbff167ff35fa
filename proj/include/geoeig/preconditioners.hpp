#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "geoeig/diagonal.hpp"
#include "geoeig/geo_matrix.hpp"

namespace geoeig {

inline void require_positive(double c, const char* what) {
  if (!(c > 0.0) || !std::isfinite(c)) throw invalid_parameter(std::string(what) + " must be a positive finite number");
}

// Localized absolute sum at vertex k: the larger of the k-th column sum and the
// k-th row sum of |A|. Entries outside B(k, w) are zero, so summing stored
// entries is summing over the ball.
inline double local_abs_sum(const GeoMatrix& a, vertex k) {
  return std::max(a.col_abs_sum(k), a.row_abs_sum(k));
}

// P_A(i,i) = max over k in B(i, w(A)) of local_abs_sum(A, k).
inline DiagonalMatrix preconditioner_P(const GeoMatrix& a) {
  const Graph& g = a.graph();
  std::vector<double> s(g.size());
  for (vertex k = 0; k < g.size(); ++k) s[k] = local_abs_sum(a, k);
  std::vector<double> p(g.size(), 0.0);
  for (vertex i = 0; i < g.size(); ++i)
    for (vertex k : ball(g, i, a.width())) p[i] = std::max(p[i], s[k]);
  return DiagonalMatrix(std::move(p));
}

// Schur norm: max_i P_A(i,i).
inline double schur_norm(const GeoMatrix& a) { return preconditioner_P(a).max(); }

// Q_c(i,i) = max(P_A(i,i), c).
inline DiagonalMatrix make_Qc(const GeoMatrix& a, double c) {
  require_positive(c, "c");
  const auto p = preconditioner_P(a);
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::max(p[i], c);
  return DiagonalMatrix(std::move(q));
}

// Q_c^sym(i,i) = max(sum_j |A(i,j)|, c).
inline DiagonalMatrix make_Qc_sym(const GeoMatrix& a, double c) {
  require_positive(c, "c");
  std::vector<double> q(a.size());
  for (vertex i = 0; i < a.size(); ++i) q[i] = std::max(a.row_abs_sum(i), c);
  return DiagonalMatrix(std::move(q));
}

}  // namespace geoeig
