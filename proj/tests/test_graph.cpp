#include <gtest/gtest.h>

#include <cmath>

#include "geoeig.hpp"
#include "support/fixtures.hpp"
#include "support/naive.hpp"

using namespace geoeig;

using adjacency = std::vector<std::vector<vertex>>;

TEST(Rng, MersenneTwisterMatchesReferenceStream) {
  // The 10000th output of a default-seeded mt19937_64 is fixed by the standard.
  rng_engine rng;
  rng.discard(9999);
  EXPECT_EQ(rng(), 9981545732273789042ULL);
}

TEST(Rng, SplitMixReferenceValue) {
  // First output of the reference SplitMix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Rng, UniformUsesTopBits) {
  rng_engine a(42), b(42);
  const double u = uniform01(a);
  EXPECT_EQ(u, static_cast<double>(b() >> 11) / 9007199254740992.0);
  EXPECT_GE(u, 0.0);
  EXPECT_LT(u, 1.0);
}

TEST(Rng, SubstreamsDiffer) {
  EXPECT_NE(substream_seed(1, stream::graph, 0), substream_seed(1, stream::initial_vector, 0));
  EXPECT_NE(substream_seed(1, stream::initial_vector, 0), substream_seed(1, stream::initial_vector, 1));
  EXPECT_EQ(substream_seed(7, stream::instance, 3), substream_seed(7, stream::instance, 3));
}

TEST(Graph, BfsOnPath) {
  const auto g = fixtures::path(3);
  EXPECT_EQ(bfs_distances(*g, 0), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Graph, BfsOnComplete) {
  const auto g = fixtures::complete(4);
  EXPECT_EQ(bfs_distances(*g, 0), (std::vector<std::size_t>{0, 1, 1, 1}));
}

TEST(Graph, BfsRejectsBadVertex) {
  const auto g = fixtures::path(3);
  EXPECT_THROW(bfs_distances(*g, 3), invalid_vertex);
  EXPECT_THROW(ball(*g, 5, 1), invalid_vertex);
}

TEST(Graph, Balls) {
  const auto g = fixtures::path(5);
  EXPECT_EQ(ball(*g, 2, 1), (std::vector<vertex>{1, 2, 3}));
  EXPECT_EQ(ball(*g, 4, 0), (std::vector<vertex>{4}));
  EXPECT_EQ(ball(*g, 0, diameter(*g)).size(), 5u);
  EXPECT_EQ(diameter(*g), 4u);
}

TEST(Graph, HopMetricProperties) {
  const auto g = fixtures::rgg(48, 11);
  const auto d = naive::all_hops(*g);
  for (vertex i = 0; i < g->size(); ++i) {
    EXPECT_EQ(bfs_distances(*g, i), d[i]);
    EXPECT_EQ(d[i][i], 0u);
    EXPECT_EQ(ball(*g, i, 1).size(), g->degree(i) + 1);
    for (std::size_t s = 0; s < 4; ++s) {
      const auto b0 = ball(*g, i, s), b1 = ball(*g, i, s + 1);
      EXPECT_TRUE(std::includes(b1.begin(), b1.end(), b0.begin(), b0.end()));
    }
    for (vertex j = 0; j < g->size(); ++j) {
      EXPECT_EQ(d[i][j], d[j][i]);
      for (vertex k = 0; k < g->size(); ++k) EXPECT_LE(d[i][k], d[i][j] + d[j][k]);
    }
  }
}

TEST(Graph, ConstructorValidates) {
  EXPECT_THROW(Graph(adjacency{{1}, {}}), invalid_input);               // asymmetric
  EXPECT_THROW(Graph(adjacency{{0}}), invalid_input);                   // self-loop
  EXPECT_THROW(Graph(adjacency{{2, 1}, {0}, {0}}), invalid_input);      // unsorted
  EXPECT_THROW(Graph(adjacency{{}, {}}), not_connected);                // disconnected
  EXPECT_THROW(Graph(adjacency{{3}, {}, {}}), invalid_vertex);          // out of range
  EXPECT_THROW(Graph::from_edges(2, {{0, 1}, {1, 0}}), invalid_input);
  EXPECT_THROW(Graph(std::vector<std::vector<vertex>>{}), invalid_input);
  EXPECT_NO_THROW(Graph(adjacency{{}}));
}

TEST(Graph, IsConnected) {
  EXPECT_TRUE(is_connected({{1}, {0, 2}, {1}}));
  EXPECT_FALSE(is_connected({{}, {}}));
  EXPECT_TRUE(is_connected({{}}));
}

TEST(Graph, GeometricSingleVertex) {
  const auto g = random_geometric_graph(1, 5);
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Graph, GeometricDeterministic) {
  const auto a = random_geometric_graph_draw(200, 99);
  const auto b = random_geometric_graph_draw(200, 99);
  EXPECT_TRUE(a.graph == b.graph);
  EXPECT_EQ(a.graph.coords(), b.graph.coords());
  EXPECT_EQ(a.resamples, b.resamples);
  EXPECT_EQ(a.seed_used, 99 + a.resamples);
}

TEST(Graph, GeometricEdgesMatchBruteForce) {
  const auto g = random_geometric_graph(300, 4);
  const auto& p = g.coords();
  const double r2 = 2.0 / 300.0;
  std::size_t edges = 0;
  for (vertex i = 0; i < 300; ++i)
    for (vertex j = i + 1; j < 300; ++j) {
      const double dx = p[i][0] - p[j][0], dy = p[i][1] - p[j][1];
      const bool adj = dx * dx + dy * dy <= r2;
      edges += adj;
      const auto nb = g.neighbors(i);
      EXPECT_EQ(adj, std::binary_search(nb.begin(), nb.end(), j));
    }
  EXPECT_EQ(edges, g.edge_count());
}

TEST(Graph, GeometricMeanDegreeBand) {
  // Monte Carlo over 200 connected draws at n = 512 measured a mean degree
  // of 5.90; generated graphs must fall within 15% of it.
  constexpr double measured = 5.90;
  double total = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto g = random_geometric_graph(512, 1000 + 17 * s);
    EXPECT_TRUE(is_connected([&] {
      std::vector<std::vector<vertex>> adj(g.size());
      for (vertex i = 0; i < g.size(); ++i) adj[i].assign(g.neighbors(i).begin(), g.neighbors(i).end());
      return adj;
    }()));
    total += g.mean_degree();
  }
  EXPECT_NEAR(total / 10.0, measured, 0.15 * measured);
}

TEST(Graph, GeometricRejectsZeroOrder) { EXPECT_THROW(random_geometric_graph(0, 1), invalid_parameter); }
