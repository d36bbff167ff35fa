#pragma once

#include <cmath>
#include <vector>

#include "geoeig/geo_matrix.hpp"
#include "geoeig/preconditioners.hpp"

namespace geoeig {

namespace detail {
inline void require_no_isolated(const Graph& g, const char* what) {
  for (vertex i = 0; i < g.size(); ++i)
    if (g.degree(i) == 0) throw invalid_input(std::string(what) + " needs every vertex degree >= 1");
}
}  // namespace detail

// L = I - D^{-1/2} A D^{-1/2}; off-diagonal entries -1/sqrt(d_i d_j).
inline GeoMatrix normalized_laplacian(const graph_ptr& g) {
  detail::require_no_isolated(*g, "normalized Laplacian");
  std::vector<std::vector<Entry>> rows(g->size());
  for (vertex i = 0; i < g->size(); ++i) {
    rows[i].push_back({i, 1.0});
    for (vertex j : g->neighbors(i))
      rows[i].push_back({j, -1.0 / std::sqrt(static_cast<double>(g->degree(i) * g->degree(j)))});
  }
  return {g, std::move(rows)};
}

// (sqrt(d_i))_i spans the kernel of the normalized Laplacian.
inline cvec sqrt_degree_vector(const Graph& g) {
  cvec v(g.size());
  for (vertex i = 0; i < g.size(); ++i) v[i] = std::sqrt(static_cast<double>(g.degree(i)));
  return v;
}

// Lowpass spline filter (I - L/2)^m.
inline GeoMatrix spline_filter(const graph_ptr& g, int m) {
  if (m < 1) throw invalid_parameter("spline order must be >= 1");
  const GeoMatrix base = combine(1.0, identity(g), -0.5, normalized_laplacian(g));
  GeoMatrix out = base;
  for (int k = 1; k < m; ++k) out = multiply(out, base);
  return out;
}

// Hyperlink matrix: W(i,j) = 1/d_j on edges. Column sums are one.
inline GeoMatrix hyperlink_matrix(const graph_ptr& g) {
  detail::require_no_isolated(*g, "hyperlink matrix");
  std::vector<std::vector<Entry>> rows(g->size());
  for (vertex i = 0; i < g->size(); ++i)
    for (vertex j : g->neighbors(i)) rows[i].push_back({j, 1.0 / static_cast<double>(g->degree(j))});
  return {g, std::move(rows)};
}

}  // namespace geoeig
