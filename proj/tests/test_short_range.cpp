#include <gtest/gtest.h>

#include "dsssp/oracle.hpp"
#include "dsssp/short_range.hpp"

using namespace dsssp;

namespace {

WeightedInstance instance(Family f, std::size_t n, Dist lambda, std::uint64_t seed) {
  GeneratorSpec g;
  g.family = f;
  g.n = n;
  g.lambda = lambda;
  g.seed = seed;
  return generate(g);
}

// Same topology, weights drawn from [0, maxw] with many zeros.
WeightedInstance with_zero_weights(const WeightedInstance& base, Dist maxw, Rng& rng) {
  std::vector<Dist> w(base.weights.size());
  for (auto& x : w) x = rng.below(3) == 0 ? 0 : rng.between(0, maxw);
  auto out = base.with_weights(w);
  out.lambda = std::max<Dist>(1, maxw);
  return out;
}

void check_contract(const WeightedInstance& inst, NodeId s, const ShortRangeParams& p, const ShortRangeResult& r) {
  auto truth = dijkstra(inst, s);
  for (NodeId t = 0; t < inst.node_count(); ++t) {
    EXPECT_GE(r.table.dist[t], truth.dist[t]) << "t=" << t;
    bool qualifies = is_finite(truth.dist[t]) && truth.hops[t] <= static_cast<std::size_t>(p.h) &&
                     truth.dist[t] <= p.ell;
    if (qualifies) EXPECT_EQ(r.table.dist[t], truth.dist[t]) << "t=" << t;
  }
  EXPECT_LE(r.metrics.rounds, static_cast<Round>(p.ell * p.q + 2 * p.h + 2));
  EXPECT_LE(r.metrics.max_edge_congestion(), static_cast<std::uint64_t>(1 + p.h / p.q));
}

}  // namespace

TEST(ShortRange, ParamsValidate) {
  EXPECT_THROW((ShortRangeParams{1, 1, 0}).validate(), ParamError);
  EXPECT_THROW((ShortRangeParams{0, 1, 1}).validate(), ParamError);
  EXPECT_THROW((ShortRangeParams{1, 0, 1}).validate(), ParamError);
  EXPECT_NO_THROW((ShortRangeParams{1, 1, 1}).validate());
}

TEST(ShortRange, HandExampleWithZeroEdge) {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {1, 2}};
  WeightedInstance inst;
  inst.topology = std::make_shared<const Topology>(Topology::from_edges(3, e));
  inst.weights.assign(4, 9);
  inst.lambda = 9;
  inst.weights[*inst.topology->find_channel(0, 1)] = 0;
  inst.weights[*inst.topology->find_channel(1, 2)] = 2;
  auto r = short_range(inst, 0, {3, 5, 2});
  EXPECT_EQ(r.table.dist, (std::vector<Dist>{0, 0, 2}));
}

TEST(ShortRange, BeyondHopBudgetNeverUndercuts) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId v = 1; v < 8; ++v) e.push_back({v - 1, v});
  WeightedInstance inst;
  inst.topology = std::make_shared<const Topology>(Topology::from_edges(8, e));
  inst.weights.assign(14, 0);
  auto r = short_range(inst, 0, {3, 2, 1});
  for (NodeId v = 0; v < 8; ++v) EXPECT_GE(r.table.dist[v], 0);
  for (NodeId v = 0; v <= 3; ++v) EXPECT_EQ(r.table.dist[v], 0);
}

TEST(ShortRange, RandomN80Example) {
  auto base = instance(Family::erdos_renyi_connected, 80, 1, 11);
  Rng rng(11);
  auto inst = with_zero_weights(base, 6, rng);
  ShortRangeParams p{20, 30, 3};
  auto r = short_range(inst, 0, p);
  check_contract(inst, 0, p, r);
}

TEST(ShortRange, ContractProperty) {
  const Family fams[] = {Family::erdos_renyi_connected, Family::grid, Family::path, Family::star_of_paths};
  Rng rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    Family f = fams[trial % 4];
    auto base = instance(f, f == Family::grid ? 49 : 20 + rng.below(60), 1, rng.next());
    auto inst = with_zero_weights(base, rng.between(1, 8), rng);
    ShortRangeParams p{rng.between(1, 25), rng.between(1, 30), rng.between(1, 5)};
    NodeId s = static_cast<NodeId>(rng.below(inst.node_count()));
    auto r = short_range(inst, s, p);
    check_contract(inst, s, p, r);
    std::uint64_t budget = static_cast<std::uint64_t>(p.bf_budget());
    for (auto c : r.bfs_broadcasts) EXPECT_LE(c, 1u);
    for (auto c : r.bf_broadcasts) EXPECT_LE(c, budget);
  }
}

TEST(ShortRangeMany, SingleSourceEqualsSolo) {
  auto inst = instance(Family::erdos_renyi_connected, 50, 5, 3);
  ShortRangeParams p{8, 10, 2};
  auto many = short_range_many(inst, {4}, p, 1);
  EXPECT_EQ(many.tables[0], short_range(inst, 4, p).table);
}

TEST(ShortRangeMany, TenSourcesMatchSoloRuns) {
  auto inst = instance(Family::erdos_renyi_connected, 100, 4, 8);
  ShortRangeParams p{12, 15, 2};
  std::vector<NodeId> sources;
  for (NodeId v = 0; v < 100; v += 10) sources.push_back(v);
  auto many = short_range_many(inst, sources, p, 77);
  Round log_n = static_cast<Round>(ceil_log2(100));
  EXPECT_EQ(many.schedule.dilation, static_cast<Round>(p.ell * p.q + 2 * p.h + 2));
  EXPECT_EQ(many.schedule.congestion, static_cast<Round>(sources.size() * (1 + p.h / p.q)));
  EXPECT_LE(many.metrics.rounds, round_cap_multiplier() * (many.schedule.dilation + many.schedule.congestion) * log_n);
  for (std::size_t i = 0; i < sources.size(); ++i) EXPECT_EQ(many.tables[i], short_range(inst, sources[i], p).table);
}

TEST(ShortRangeMany, DumbbellHalvesAreIndependent) {
  // Two 5-cliques joined by one bridge.
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId base : {0u, 5u})
    for (NodeId u = 0; u < 5; ++u)
      for (NodeId v = u + 1; v < 5; ++v) e.push_back({base + u, base + v});
  e.push_back({4, 5});
  WeightedInstance inst;
  inst.topology = std::make_shared<const Topology>(Topology::from_edges(10, e));
  Rng rng(4);
  inst.weights.resize(inst.topology->channel_count());
  for (auto& w : inst.weights) w = rng.between(1, 3);
  inst.lambda = 3;
  ShortRangeParams p{4, 6, 1};
  auto many = short_range_many(inst, {0, 9}, p, 5);
  EXPECT_EQ(many.tables[0], short_range(inst, 0, p).table);
  EXPECT_EQ(many.tables[1], short_range(inst, 9, p).table);
}
