#include <gtest/gtest.h>

#include <map>

#include "dsssp/congest_sim.hpp"
#include "dsssp/graph_model.hpp"
#include "dsssp/oracle.hpp"
#include "dsssp/short_range.hpp"

using namespace dsssp;

namespace {

Topology path_topology(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId v = 1; v < n; ++v) e.push_back({v - 1, v});
  return Topology::from_edges(n, e);
}

WeightedInstance random_instance(Family f, std::size_t n, Dist lambda, std::uint64_t seed) {
  GeneratorSpec g;
  g.family = f;
  g.n = n;
  g.lambda = lambda;
  g.seed = seed;
  return generate(g);
}

// Hop counting flood; records the round each node first hears.
class Flood : public Protocol {
 public:
  explicit Flood(std::size_t n) : heard(n, kInfinity) {}
  void init(NodeContext& ctx) override {
    if (ctx.self() == 0) {
      heard[0] = 0;
      ctx.broadcast(Message::one(0));
    }
  }
  void step(NodeContext& ctx) override {
    if (is_finite(heard[ctx.self()])) return;
    heard[ctx.self()] = static_cast<Dist>(ctx.round());
    ctx.broadcast(Message::one(ctx.round()));
  }
  std::vector<Dist> heard;
};

class DoubleSend : public Protocol {
 public:
  void init(NodeContext& ctx) override {
    if (ctx.self() != 0) return;
    ctx.send(0, Message::one(1));
    ctx.send(0, Message::one(2));
  }
  void step(NodeContext&) override {}
};

class BigWord : public Protocol {
 public:
  explicit BigWord(std::uint64_t w) : w_(w) {}
  void init(NodeContext& ctx) override {
    if (ctx.self() == 0) ctx.send(0, Message::one(w_));
  }
  void step(NodeContext&) override {}
  std::uint64_t w_;
};

// Ping-pong forever between nodes 0 and 1.
class PingPong : public Protocol {
 public:
  void init(NodeContext& ctx) override {
    if (ctx.self() == 0) ctx.send(0, Message::one(0));
  }
  void step(NodeContext& ctx) override { ctx.send(0, Message::one(ctx.round())); }
};

class Sleeper : public Protocol {
 public:
  void init(NodeContext& ctx) override { ctx.wake_at(5 + ctx.self()); }
  void step(NodeContext& ctx) override { woke.push_back({ctx.self(), ctx.round()}); }
  Round scheduled_rounds() const override { return 20; }
  std::vector<std::pair<NodeId, Round>> woke;
};

}  // namespace

TEST(Engine, FloodReachesNodesAtHopDistance) {
  auto inst = random_instance(Family::erdos_renyi_connected, 60, 1, 4);
  Flood f(60);
  auto m = run_protocol(*inst.topology, f);
  auto hops = hop_distances(*inst.topology, 0);
  for (NodeId v = 0; v < 60; ++v) EXPECT_EQ(f.heard[v], static_cast<Dist>(hops[v]));
  std::size_t ecc = *std::max_element(hops.begin(), hops.end());
  EXPECT_EQ(m.rounds, ecc + 1);
  EXPECT_EQ(m.total_messages(), inst.topology->channel_count());
  EXPECT_EQ(m.max_edge_congestion(), 1u);
  EXPECT_EQ(m.per_node_broadcast_max(), 1u);
}

TEST(Engine, EnforcesOneMessagePerChannelPerRound) {
  auto t = path_topology(3);
  DoubleSend p;
  EXPECT_THROW(run_protocol(t, p), CapacityViolation);
}

TEST(Engine, EnforcesWordCap) {
  auto t = path_topology(2);
  EngineConfig cfg;
  cfg.word_cap = 100;
  BigWord ok(100), bad(101);
  EXPECT_NO_THROW(run_protocol(t, ok, cfg));
  EXPECT_THROW(run_protocol(t, bad, cfg), PayloadViolation);
}

TEST(Engine, EnforcesRoundCap) {
  auto t = path_topology(2);
  EngineConfig cfg;
  cfg.round_cap = 50;
  PingPong p;
  EXPECT_THROW(run_protocol(t, p, cfg), RoundCapExceeded);
}

TEST(Engine, WakeupsAndScheduledRounds) {
  auto t = path_topology(4);
  Sleeper s;
  auto m = run_protocol(t, s);
  EXPECT_EQ(m.rounds, 20u);
  ASSERT_EQ(s.woke.size(), 4u);
  for (auto [v, r] : s.woke) EXPECT_EQ(r, 5 + v);
}

TEST(Engine, TraceMatchesCounters) {
  auto inst = random_instance(Family::grid, 36, 1, 1);
  Flood f(36);
  EngineConfig cfg;
  cfg.trace = true;
  auto m = run_protocol(*inst.topology, f, cfg);
  EXPECT_EQ(m.trace.size(), m.total_messages());
  std::vector<std::uint64_t> count(inst.topology->channel_count(), 0);
  for (auto& e : m.trace) ++count[e.channel];
  EXPECT_EQ(count, m.edge_messages);
}

TEST(Wire, SentinelRoundTrip) {
  std::uint64_t cap = word_cap_for(100, 1000);
  EXPECT_GE(cap, 100u * 1000u + 1u);
  EXPECT_EQ(decode_dist(encode_dist(kInfinity, cap), cap), kInfinity);
  EXPECT_EQ(decode_dist(encode_dist(99999, cap), cap), 99999);
  EXPECT_EQ(encode_dist(0, cap), 0u);
}

TEST(Metrics, AppendAndAddCounts) {
  auto t = path_topology(3);
  auto a = RunMetrics::empty(t);
  a.rounds = 5;
  a.edge_messages[0] = 2;
  a.node_broadcasts[1] = 1;
  auto b = a;
  b.rounds = 7;
  b.peak_payload = 9;
  auto c = a;
  c.append(b);
  EXPECT_EQ(c.rounds, 12u);
  EXPECT_EQ(c.edge_messages[0], 4u);
  EXPECT_EQ(c.peak_payload, 9u);
  auto d = a;
  d.add_counts(b);
  EXPECT_EQ(d.rounds, 5u);
  EXPECT_EQ(d.node_broadcasts[1], 2u);
}

TEST(BfsTree, ParentsAreOneLevelUp) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto inst = random_instance(Family::erdos_renyi_connected, 80, 1, seed);
    const auto& t = *inst.topology;
    RunMetrics m;
    auto tree = build_bfs_tree(t, 3, &m);
    auto hops = hop_distances(t, 3);
    EXPECT_EQ(tree.parent[3], 3u);
    for (NodeId v = 0; v < 80; ++v) {
      EXPECT_EQ(tree.level[v], hops[v]);
      if (v == 3) continue;
      EXPECT_EQ(hops[tree.parent[v]] + 1, hops[v]);
      EXPECT_EQ(t.neighbors(v)[tree.parent_port[v]], tree.parent[v]);
    }
    EXPECT_EQ(tree.depth, *std::max_element(hops.begin(), hops.end()));
    EXPECT_LE(m.rounds, tree.depth + 2);
    auto d_hat = estimate_diameter(build_bfs_tree(t, 0));
    EXPECT_GE(d_hat, exact_diameter(t));
    EXPECT_LE(d_hat, 2 * exact_diameter(t));
  }
}

TEST(Broadcast, EveryNodeReceivesTheSameSequenceProperty) {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = random_instance(trial % 2 ? Family::grid : Family::erdos_renyi_connected, trial % 2 ? 25 : 40, 1,
                                rng.next());
    const auto& t = *inst.topology;
    std::size_t n = t.node_count();
    auto tree = build_bfs_tree(t, 0);
    std::vector<std::vector<Message>> items(n);
    std::size_t m = 0;
    std::map<std::uint64_t, int> expected;
    for (NodeId v = 0; v < n; ++v) {
      std::size_t c = rng.below(4);
      for (std::size_t j = 0; j < c; ++j) {
        items[v].push_back(Message::two(v, j));
        ++expected[v * 16 + j];
        ++m;
      }
    }
    BroadcastOptions opt;
    opt.collect_per_node = true;
    if (trial % 3 == 0) opt.known_count = m;
    auto r = pipelined_broadcast(t, tree, items, opt);
    ASSERT_EQ(r.items.size(), m);
    std::map<std::uint64_t, int> got;
    for (auto& msg : r.items) ++got[msg[0] * 16 + msg[1]];
    EXPECT_EQ(got, expected);
    for (NodeId v = 0; v < n; ++v) EXPECT_EQ(r.per_node[v], r.items);
    EXPECT_LE(r.metrics.rounds, 2 * tree.depth + 2 * m + 2);
  }
}

TEST(Broadcast, DeclaredCountMustMatch) {
  auto t = path_topology(4);
  auto tree = build_bfs_tree(t, 0);
  std::vector<std::vector<Message>> items(4);
  items[2].push_back(Message::one(7));
  BroadcastOptions opt;
  opt.known_count = 2;
  EXPECT_THROW(pipelined_broadcast(t, tree, items, opt), ConsistencyError);
}

TEST(Scheduler, ShortRangeInstancesMatchSoloAndMeetCap) {
  auto inst = random_instance(Family::erdos_renyi_connected, 64, 8, 5);
  ShortRangeParams p{6, 3, 2};
  std::vector<NodeId> sources{0, 5, 9, 13, 20, 33, 41, 50, 57, 63};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto many = short_range_many(inst, sources, p, seed, {}, true);
    const auto& s = many.schedule;
    Round log_n = static_cast<Round>(ceil_log2(64));
    EXPECT_LE(many.metrics.rounds, 64 * (s.dilation + s.congestion) * log_n);
    for (std::size_t i = 0; i < sources.size(); ++i) {
      auto solo = short_range(inst, sources[i], p);
      EXPECT_EQ(many.tables[i], solo.table);
      EXPECT_GE(s.finish[i], s.delays[i] + many.solo[i].rounds);
    }
    std::uint64_t total = 0;
    for (auto& solo : many.solo) total += solo.total_messages();
    EXPECT_EQ(many.metrics.total_messages(), total);
  }
}

TEST(Scheduler, RespectsRoundOrderAndChannelCapacity) {
  auto inst = random_instance(Family::grid, 36, 1, 1);
  const auto& t = *inst.topology;
  std::vector<Flood> floods(6, Flood(36));
  std::vector<Protocol*> ptrs;
  for (auto& f : floods) ptrs.push_back(&f);
  ScheduleOptions opt;
  opt.seed = 3;
  opt.keep_trace = true;
  auto r = schedule_parallel(t, ptrs, opt);
  std::map<std::pair<std::uint32_t, ChannelId>, int> used;
  for (auto& e : r.schedule.metrics.trace) EXPECT_EQ(++used[std::make_pair(e.round, e.channel)], 1);
  EXPECT_EQ(r.schedule.metrics.trace.size(), 6 * t.channel_count());
  EXPECT_LE(r.schedule.metrics.rounds, r.schedule.cap);
}

TEST(Scheduler, CapMultiplierIsAdjustable) {
  auto old = round_cap_multiplier();
  set_round_cap_multiplier(1);
  EXPECT_EQ(round_cap_multiplier(), 1u);
  EXPECT_THROW(set_round_cap_multiplier(0), ParamError);
  set_round_cap_multiplier(old);
}
