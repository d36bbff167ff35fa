#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geoeig/errors.hpp"
#include "geoeig/rng.hpp"

namespace geoeig {

using vertex = std::size_t;
using point2 = std::array<double, 2>;

// Sentinel hop distance for vertices outside a bounded search.
inline constexpr std::size_t unreachable = std::numeric_limits<std::size_t>::max();

// Returns true iff one breadth-first search from vertex 0 reaches every
// vertex. The adjacency is assumed symmetric. An empty list is connected.
inline bool is_connected(const std::vector<std::vector<vertex>>& adjacency) {
  const std::size_t n = adjacency.size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<vertex> queue{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (vertex j : adjacency[queue[head]]) {
      if (j < n && !seen[j]) {
        seen[j] = 1;
        queue.push_back(j);
      }
    }
  }
  return queue.size() == n;
}

// Undirected, connected, simple graph on vertices 0..n-1 with sorted
// adjacency lists stored in compressed form. Immutable once built.
class Graph {
 public:
  // Validates symmetry, sortedness, absence of self-loops and duplicates, and
  // connectivity.
  explicit Graph(std::vector<std::vector<vertex>> adjacency,
                 std::optional<std::vector<point2>> coords = std::nullopt) {
    const std::size_t n = adjacency.size();
    if (n == 0) throw invalid_input("graph must have at least one vertex");
    offsets_.reserve(n + 1);
    offsets_.push_back(0);
    for (vertex i = 0; i < n; ++i) {
      const auto& nbrs = adjacency[i];
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const vertex j = nbrs[k];
        if (j >= n) throw invalid_vertex("neighbor index out of range");
        if (j == i) throw invalid_input("self-loop at vertex " + std::to_string(i));
        if (k > 0 && nbrs[k - 1] >= j)
          throw invalid_input("neighbor list of vertex " + std::to_string(i) +
                              " is not strictly ascending");
        if (!std::binary_search(adjacency[j].begin(), adjacency[j].end(), i))
          throw invalid_input("adjacency is not symmetric");
      }
      neighbors_.insert(neighbors_.end(), nbrs.begin(), nbrs.end());
      offsets_.push_back(neighbors_.size());
    }
    if (!is_connected(adjacency)) throw not_connected("graph is not connected");
    if (coords && coords->size() != n)
      throw dimension_mismatch("coordinate count differs from vertex count");
    coords_ = std::move(coords);
  }

  // Builds from an undirected edge list; each edge may appear in either
  // orientation but only once.
  static Graph from_edges(std::size_t n, const std::vector<std::pair<vertex, vertex>>& edges,
                          std::optional<std::vector<point2>> coords = std::nullopt) {
    std::vector<std::vector<vertex>> adj(n);
    for (auto [i, j] : edges) {
      if (i >= n || j >= n) throw invalid_vertex("edge endpoint out of range");
      if (i == j) throw invalid_input("self-loop in edge list");
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
    for (auto& nbrs : adj) {
      std::sort(nbrs.begin(), nbrs.end());
      if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
        throw invalid_input("duplicate edge in edge list");
    }
    return Graph(std::move(adj), std::move(coords));
  }

  std::size_t size() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }

  std::span<const vertex> neighbors(vertex i) const {
    check(i);
    return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  std::size_t degree(vertex i) const {
    check(i);
    return offsets_[i + 1] - offsets_[i];
  }

  double mean_degree() const {
    return static_cast<double>(neighbors_.size()) / static_cast<double>(size());
  }

  bool has_coords() const { return coords_.has_value(); }
  const std::vector<point2>& coords() const {
    if (!coords_) throw invalid_input("graph carries no coordinates");
    return *coords_;
  }

  // Edges (i, j) with i < j in ascending order.
  std::vector<std::pair<vertex, vertex>> edges() const {
    std::vector<std::pair<vertex, vertex>> out;
    out.reserve(edge_count());
    for (vertex i = 0; i < size(); ++i)
      for (vertex j : neighbors(i))
        if (i < j) out.emplace_back(i, j);
    return out;
  }

  void check(vertex i) const {
    if (i >= size())
      throw invalid_vertex("vertex " + std::to_string(i) + " out of range [0, " +
                           std::to_string(size()) + ")");
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<vertex> neighbors_;
  std::optional<std::vector<point2>> coords_;
};

using graph_ptr = std::shared_ptr<const Graph>;

inline graph_ptr share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

// Hop distances from `source`, truncated at `max_hops` (vertices farther away
// report `unreachable`). With the default bound every entry is finite.
inline std::vector<std::size_t> bfs_distances(const Graph& g, vertex source,
                                              std::size_t max_hops = unreachable) {
  g.check(source);
  std::vector<std::size_t> dist(g.size(), unreachable);
  std::vector<vertex> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const vertex v = queue[head];
    if (dist[v] == max_hops) continue;
    for (vertex w : g.neighbors(v)) {
      if (dist[w] == unreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

// B(i, s): vertices within s hops of i, ascending.
inline std::vector<vertex> ball(const Graph& g, vertex i, std::size_t s) {
  const auto dist = bfs_distances(g, i, s);
  std::vector<vertex> out;
  for (vertex j = 0; j < g.size(); ++j)
    if (dist[j] <= s) out.push_back(j);
  return out;
}

// All balls of a fixed radius; row i is B(i, s).
inline std::vector<std::vector<vertex>> balls(const Graph& g, std::size_t s) {
  std::vector<std::vector<vertex>> out(g.size());
  for (vertex i = 0; i < g.size(); ++i) out[i] = ball(g, i, s);
  return out;
}

inline std::size_t diameter(const Graph& g) {
  std::size_t d = 0;
  for (vertex i = 0; i < g.size(); ++i) {
    const auto dist = bfs_distances(g, i);
    d = std::max(d, *std::max_element(dist.begin(), dist.end()));
  }
  return d;
}

namespace detail {

// Undirected geometric adjacency: edge iff squared distance <= radius2.
// Candidate pairs come from a uniform cell grid of side >= sqrt(radius2).
inline std::vector<std::vector<vertex>> geometric_adjacency(const std::vector<point2>& pts,
                                                            double radius2) {
  const std::size_t n = pts.size();
  std::vector<std::vector<vertex>> adj(n);
  const double radius = std::sqrt(radius2);
  const auto cells = static_cast<std::size_t>(
      std::max(1.0, std::min(std::floor(1.0 / radius), 4096.0)));
  auto cell_of = [&](double v) {
    return std::min(cells - 1, static_cast<std::size_t>(std::max(0.0, v) * cells));
  };
  std::vector<std::vector<vertex>> grid(cells * cells);
  for (vertex i = 0; i < n; ++i) grid[cell_of(pts[i][0]) * cells + cell_of(pts[i][1])].push_back(i);

  for (vertex i = 0; i < n; ++i) {
    const std::size_t cx = cell_of(pts[i][0]);
    const std::size_t cy = cell_of(pts[i][1]);
    for (std::size_t gx = cx == 0 ? 0 : cx - 1; gx <= std::min(cells - 1, cx + 1); ++gx) {
      for (std::size_t gy = cy == 0 ? 0 : cy - 1; gy <= std::min(cells - 1, cy + 1); ++gy) {
        for (vertex j : grid[gx * cells + gy]) {
          if (j == i) continue;
          const double dx = pts[i][0] - pts[j][0];
          const double dy = pts[i][1] - pts[j][1];
          if (dx * dx + dy * dy <= radius2) adj[i].push_back(j);
        }
      }
    }
    std::sort(adj[i].begin(), adj[i].end());
  }
  return adj;
}

}  // namespace detail

struct GeometricDraw {
  Graph graph;
  std::uint64_t seed_used;
  std::size_t resamples;
};

inline constexpr std::size_t max_graph_resamples = 1000;

// Random geometric graph on [0,1]^2: n points, x then y per point, drawn from
// mt19937_64(seed); edge iff squared Euclidean distance <= 2/n. Disconnected
// draws are redrawn with seed+1, seed+2, ... up to max_graph_resamples times.
inline GeometricDraw random_geometric_graph_draw(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw invalid_parameter("random_geometric_graph needs n >= 1");
  const double radius2 = 2.0 / static_cast<double>(n);
  for (std::size_t k = 0; k <= max_graph_resamples; ++k) {
    auto rng = make_rng(seed + k);
    std::vector<point2> pts(n);
    for (auto& p : pts) {
      p[0] = uniform01(rng);
      p[1] = uniform01(rng);
    }
    auto adj = detail::geometric_adjacency(pts, radius2);
    if (is_connected(adj)) return {Graph(std::move(adj), std::move(pts)), seed + k, k};
  }
  throw generation_failure("no connected random geometric graph after " +
                           std::to_string(max_graph_resamples) + " resamples");
}

inline Graph random_geometric_graph(std::size_t n, std::uint64_t seed) {
  return random_geometric_graph_draw(n, seed).graph;
}

}  // namespace geoeig
