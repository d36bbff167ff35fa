#pragma once

#include <utility>
#include <vector>

#include "geoeig.hpp"

namespace fixtures {

using geoeig::cplx;
using geoeig::cvec;
using geoeig::graph_ptr;

inline graph_ptr path(std::size_t n) {
  std::vector<std::pair<geoeig::vertex, geoeig::vertex>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return geoeig::share(geoeig::Graph::from_edges(n, e));
}

inline graph_ptr complete(std::size_t n) {
  std::vector<std::pair<geoeig::vertex, geoeig::vertex>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return geoeig::share(geoeig::Graph::from_edges(n, e));
}

inline graph_ptr star(std::size_t leaves) {
  std::vector<std::pair<geoeig::vertex, geoeig::vertex>> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return geoeig::share(geoeig::Graph::from_edges(leaves + 1, e));
}

inline geoeig::GeoMatrix dense_to_geo(const graph_ptr& g, const std::vector<std::vector<cplx>>& d) {
  geoeig::GeoMatrix::Builder b(g);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d[i].size(); ++j)
      if (d[i][j] != cplx{}) b.add(i, j, d[i][j]);
  return std::move(b).freeze();
}

inline graph_ptr rgg(std::size_t n, std::uint64_t seed) { return geoeig::share(geoeig::random_geometric_graph(n, seed)); }

inline cvec unit_vector(std::size_t n, std::uint64_t seed) {
  auto rng = geoeig::make_rng(seed);
  return geoeig::to_complex(geoeig::random_unit_interval(n, rng));
}

inline double max_diff(const cvec& a, const cvec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace fixtures
