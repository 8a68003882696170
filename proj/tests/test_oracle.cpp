#include <gtest/gtest.h>

#include "dsssp/oracle.hpp"

using namespace dsssp;

namespace {

// Floyd-Warshall on a dense matrix: a third, structurally different oracle.
std::vector<std::vector<Dist>> floyd(const Digraph& g) {
  std::size_t n = g.node_count();
  std::vector<std::vector<Dist>> d(n, std::vector<Dist>(n, kInfinity));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0;
  for (const Arc& a : g.arcs()) d[a.tail][a.head] = std::min(d[a.tail][a.head], a.w);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], add_dist(d[i][k], d[k][j]));
  return d;
}

Digraph random_digraph(Rng& rng, std::size_t n, std::size_t m, Dist maxw) {
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < m; ++i)
    arcs.push_back({static_cast<NodeId>(rng.below(n)), static_cast<NodeId>(rng.below(n)), rng.between(0, maxw)});
  return Digraph(n, arcs);
}

}  // namespace

TEST(Oracle, HandComputedExample) {
  // 0 -> 1 (4), 0 -> 2 (1), 2 -> 1 (2), 1 -> 3 (1), 2 -> 3 (5)
  Digraph g(4, {{0, 1, 4}, {0, 2, 1}, {2, 1, 2}, {1, 3, 1}, {2, 3, 5}});
  auto r = dijkstra(g, 0);
  EXPECT_EQ(r.dist, (std::vector<Dist>{0, 3, 1, 4}));
  EXPECT_EQ(r.hops, (std::vector<std::size_t>{0, 2, 1, 3}));
  EXPECT_EQ(canonical_path(r, 0, 3), (std::vector<NodeId>{0, 2, 1, 3}));
  EXPECT_EQ(bellman_ford(g, 0), r.dist);
  EXPECT_EQ(hop_bounded_distances(g, 0, 1), (std::vector<Dist>{0, 4, 1, kInfinity}));
  EXPECT_EQ(hop_bounded_distances(g, 0, 2), (std::vector<Dist>{0, 3, 1, 5}));
}

TEST(Oracle, PrefersFewerHopsAmongTies) {
  Digraph g(3, {{0, 1, 0}, {1, 2, 2}, {0, 2, 2}});
  auto r = dijkstra(g, 0);
  EXPECT_EQ(r.dist[2], 2);
  EXPECT_EQ(r.hops[2], 1u);
  EXPECT_EQ(r.parent[2], 0u);
}

TEST(Oracle, UnreachableIsInfinite) {
  Digraph g(3, {{0, 1, 1}});
  auto r = dijkstra(g, 0);
  EXPECT_EQ(r.dist[2], kInfinity);
  EXPECT_EQ(bellman_ford(g, 0)[2], kInfinity);
}

TEST(Oracle, ThreeOraclesAgreeProperty) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng.below(25);
    auto g = random_digraph(rng, n, rng.below(4 * n + 1), trial % 3 == 0 ? 0 : rng.between(1, 1000));
    auto fw = floyd(g);
    NodeId s = static_cast<NodeId>(rng.below(n));
    auto r = dijkstra(g, s);
    EXPECT_EQ(r.dist, fw[s]);
    EXPECT_EQ(bellman_ford(g, s), fw[s]);
    EXPECT_EQ(hop_bounded_distances(g, s, n), fw[s]);
    for (NodeId t = 0; t < n; ++t) {
      if (!is_finite(r.dist[t])) continue;
      auto path = canonical_path(r, s, t);
      EXPECT_EQ(path.size(), r.hops[t] + 1);
      Dist sum = 0;
      for (std::size_t i = 1; i < path.size(); ++i) {
        Dist best = kInfinity;
        for (std::size_t a = g.out_begin(path[i - 1]); a < g.out_end(path[i - 1]); ++a)
          if (g.arcs()[a].head == path[i]) best = std::min(best, g.arcs()[a].w);
        sum += best;
      }
      EXPECT_EQ(sum, r.dist[t]);
    }
  }
}

TEST(Oracle, HopBoundedIsMonotoneProperty) {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + rng.below(20);
    auto g = random_digraph(rng, n, 3 * n, 50);
    std::vector<Dist> prev = hop_bounded_distances(g, 0, 0);
    EXPECT_EQ(prev[0], 0);
    for (std::size_t h = 1; h <= n; ++h) {
      auto cur = hop_bounded_distances(g, 0, h);
      for (std::size_t v = 0; v < n; ++v) EXPECT_LE(cur[v], prev[v]);
      // d^h(v) = min(d^{h-1}(v), min over arcs u->v of d^{h-1}(u) + w)
      for (std::size_t v = 0; v < n; ++v) {
        Dist best = prev[v];
        for (const Arc& a : g.arcs())
          if (a.head == v) best = std::min(best, add_dist(prev[a.tail], a.w));
        EXPECT_EQ(cur[v], best);
      }
      prev = cur;
    }
  }
}

TEST(Oracle, InstanceHelpers) {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  WeightedInstance inst;
  inst.topology = std::make_shared<const Topology>(Topology::from_edges(4, e));
  inst.weights.assign(8, 1);
  inst.lambda = 5;
  inst.weights[*inst.topology->find_channel(0, 1)] = 5;
  auto r = dijkstra(inst, 0);
  EXPECT_EQ(r.dist, (std::vector<Dist>{0, 3, 2, 1}));
  EXPECT_EQ(hop_distances(*inst.topology, 0), (std::vector<std::size_t>{0, 1, 2, 1}));
  EXPECT_EQ(exact_diameter(*inst.topology), 2u);
}
