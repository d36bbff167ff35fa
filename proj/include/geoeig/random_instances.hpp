#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "geoeig/geo_matrix.hpp"
#include "geoeig/graph.hpp"
#include "geoeig/poly_filter.hpp"
#include "geoeig/rng.hpp"

namespace geoeig::random {

inline cplx complex_in_box(rng_engine& rng) { return {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}; }

// Random complex matrix of geodesic-width exactly `width` (when the graph's
// diameter allows): full diagonal, each other pair within `width` hops kept
// with probability `density`, entries uniform in [-1,1] + i[-1,1]. With
// `hermitian`, A(j,i) = conj A(i,j) and the diagonal is real.
inline GeoMatrix local_matrix(const graph_ptr& g, std::size_t width, rng_engine& rng, bool hermitian = false,
                              double density = 0.6) {
  const std::size_t n = g->size();
  std::vector<std::vector<Entry>> rows(n);
  bool reached = width == 0;
  for (vertex i = 0; i < n; ++i) {
    const auto dist = bfs_distances(*g, i, width);
    for (vertex j = 0; j < n; ++j) {
      if (dist[j] > width) continue;
      if (hermitian && j < i) continue;
      bool keep = j == i || uniform01(rng) < density;
      // Guarantee one pair at full distance so the width is exact.
      if (!reached && dist[j] == width) keep = reached = true;
      if (!keep) continue;
      cplx v = complex_in_box(rng);
      if (hermitian && j == i) v = v.real();
      rows[i].push_back({j, v});
      if (hermitian && j != i) rows[j].push_back({i, std::conj(v)});
    }
  }
  return {g, std::move(rows)};
}

// diag(z) L_w with L_w a combinatorial Laplacian with weights in [0.5, 1.5]
// and z_i random complex: non-Hermitian, with the all-one vector in its
// kernel.
inline GeoMatrix planted_kernel_matrix(const graph_ptr& g, rng_engine& rng) {
  const std::size_t n = g->size();
  std::vector<std::vector<Entry>> rows(n);
  std::vector<std::vector<double>> w(n);
  for (vertex i = 0; i < n; ++i) w[i].assign(g->degree(i), 0.0);
  for (vertex i = 0; i < n; ++i) {
    const auto nb = g->neighbors(i);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (nb[k] > i) {
        const double v = uniform(rng, 0.5, 1.5);
        w[i][k] = v;
        const auto back = g->neighbors(nb[k]);
        w[nb[k]][static_cast<std::size_t>(std::lower_bound(back.begin(), back.end(), i) - back.begin())] = v;
      }
  }
  for (vertex i = 0; i < n; ++i) {
    const cplx z = complex_in_box(rng) + cplx(0.1, 0.0);
    double deg = 0.0;
    for (double v : w[i]) deg += v;
    rows[i].push_back({i, z * deg});
    const auto nb = g->neighbors(i);
    for (std::size_t k = 0; k < nb.size(); ++k) rows[i].push_back({nb[k], -z * w[i][k]});
  }
  return {g, std::move(rows)};
}

// Magnetic Laplacian D - W with W Hermitian, |W(i,j)| in [0.5, 1.5] and
// random phases; Hermitian positive semidefinite.
inline GeoMatrix magnetic_laplacian(const graph_ptr& g, rng_engine& rng) {
  const std::size_t n = g->size();
  std::vector<std::vector<Entry>> rows(n);
  std::vector<double> deg(n, 0.0);
  for (vertex i = 0; i < n; ++i)
    for (vertex j : g->neighbors(i))
      if (j > i) {
        const double mag = uniform(rng, 0.5, 1.5);
        const double phase = uniform(rng, -3.14159, 3.14159);
        const cplx v = std::polar(mag, phase);
        rows[i].push_back({j, -v});
        rows[j].push_back({i, -std::conj(v)});
        deg[i] += mag;
        deg[j] += mag;
      }
  for (vertex i = 0; i < n; ++i) rows[i].push_back({i, deg[i]});
  return {g, std::move(rows)};
}

// Random filter with d in {1, .., max_dim} commuting width-one shifts
// S_1 = B and S_k = a_k I + b_k B for a random local B, degrees in
// {0, .., max_degree} and complex coefficients in the unit box.
inline PolyFilter poly_filter(const graph_ptr& g, rng_engine& rng, unsigned max_dim = 2, unsigned max_degree = 2) {
  const unsigned d = 1 + static_cast<unsigned>(uniform_index(rng, max_dim));
  const GeoMatrix base = local_matrix(g, g->size() > 1 ? 1 : 0, rng);
  std::vector<GeoMatrix> shifts{base};
  for (unsigned k = 1; k < d; ++k)
    shifts.push_back(combine(complex_in_box(rng), identity(g), complex_in_box(rng), base));
  std::vector<unsigned> degrees(d);
  std::size_t lattice = 1;
  for (auto& L : degrees) {
    L = static_cast<unsigned>(uniform_index(rng, max_degree + 1));
    lattice *= L + 1;
  }
  cvec coeffs(lattice);
  for (auto& h : coeffs) h = complex_in_box(rng);
  return PolyFilter(g, std::move(shifts), std::move(degrees), std::move(coeffs));
}

// Connected random geometric graph drawn from the instance substream.
inline graph_ptr geometric_graph(std::size_t n, std::uint64_t seed) {
  return share(random_geometric_graph(n, seed));
}

inline cvec unit_interval_vector(std::size_t n, rng_engine& rng) {
  cvec x(n);
  for (auto& v : x) v = uniform01(rng);
  return x;
}

}  // namespace geoeig::random
