#include "dsssp/scaling.hpp"

#include "dsssp/oracle.hpp"

namespace dsssp {

Dist weight_prefix(Dist w, int i, int T) {
  if (T < 1 || T > 62 || i < 1 || i > T) throw RangeError("prefix index out of range");
  if (w < 0 || w >= (Dist{1} << T)) throw RangeError("weight " + std::to_string(w) + " needs more than T bits");
  return w >> (T - i);
}

int scaling_iterations(Dist lambda) {
  if (lambda < 1) throw RangeError("lambda must be positive");
  return bit_width_at_least_one(static_cast<std::uint64_t>(lambda));
}

std::vector<Dist> reweight(const Topology& t, const std::vector<Dist>& d_prev, const std::vector<Dist>& w_i) {
  std::vector<Dist> ell(t.channel_count());
  for (ChannelId c = 0; c < t.channel_count(); ++c) {
    Dist du = d_prev[t.tail(c)], dv = d_prev[t.head(c)];
    if (!is_finite(du) || !is_finite(dv)) throw NegativeWeight("reweighting with an infinite distance");
    Dist l = 2 * du + w_i[c] - 2 * dv;
    if (l < 0)
      throw NegativeWeight("reweighted edge " + std::to_string(t.tail(c)) + "->" + std::to_string(t.head(c)) +
                           " is " + std::to_string(l));
    ell[c] = l;
  }
  return ell;
}

namespace {

class ShareProtocol : public Protocol {
 public:
  ShareProtocol(const std::vector<Dist>& d, std::uint64_t sentinel) : d_(d), sentinel_(sentinel) {}
  void init(NodeContext& ctx) override { ctx.broadcast(Message::one(encode_dist(d_[ctx.self()], sentinel_))); }
  void step(NodeContext&) override {}

 private:
  const std::vector<Dist>& d_;
  std::uint64_t sentinel_;
};

}  // namespace

ReweightResult distributed_reweight(const Topology& t, const std::vector<Dist>& d_prev,
                                    const std::vector<Dist>& w_i, const EngineConfig& cfg) {
  ShareProtocol proto(d_prev, cfg.word_cap);
  ReweightResult r;
  r.metrics = run_protocol(t, proto, cfg);
  r.weights = reweight(t, d_prev, w_i);
  return r;
}

ScalingResult run_scaling(const WeightedInstance& inst, NodeId s, const InnerSolver& inner,
                          const ScalingOptions& options) {
  const auto& t = *inst.topology;
  const std::size_t n = t.node_count();
  const int T = scaling_iterations(inst.lambda);
  ScalingResult res;
  res.metrics = RunMetrics::empty(t);
  res.metrics.seed = options.engine.seed;
  std::vector<Dist> d(n, 0);
  std::vector<Dist> w_i(t.channel_count());
  for (int i = 1; i <= T; ++i) {
    for (ChannelId c = 0; c < t.channel_count(); ++c) w_i[c] = weight_prefix(inst.weights[c], i, T);
    std::vector<Dist> ell;
    if (i == 1) {
      ell = w_i;
    } else {
      auto rw = distributed_reweight(t, d, w_i, options.engine);
      res.metrics.append(rw.metrics);
      ell = std::move(rw.weights);
    }
    WeightedInstance sub = inst.with_weights(ell);
    sub.sources = {s};
    InnerResult in = inner(sub, i);
    res.metrics.append(in.metrics);
    if (options.observer) options.observer({i, T, d, w_i, ell, in.dist});
    std::vector<Dist> next(n);
    for (NodeId v = 0; v < n; ++v) next[v] = add_dist(2 * d[v], in.dist[v]);
    d = std::move(next);
    ++res.iterations;
  }
  if (options.debug_oracle) {
    auto truth = dijkstra(inst, s);
    if (truth.dist != d) throw ConsistencyError("scaling output differs from the oracle");
  }
  res.table = {s, std::move(d)};
  return res;
}

namespace {

class BellmanFordProtocol : public Protocol {
 public:
  BellmanFordProtocol(const WeightedInstance& inst, NodeId s, Round rounds, std::uint64_t sentinel)
      : inst_(inst), d_(inst.node_count(), kInfinity), rounds_(rounds), sentinel_(sentinel) {
    d_[s] = 0;
  }

  void init(NodeContext& ctx) override {
    if (d_[ctx.self()] == 0 && rounds_ > 0) ctx.broadcast(Message::one(0));
  }

  void step(NodeContext& ctx) override {
    NodeId v = ctx.self();
    Dist before = d_[v];
    for (const Envelope& e : ctx.inbox())
      d_[v] = std::min(d_[v], add_dist(decode_dist(e.msg[0], sentinel_), inst_.weight_into(v, e.port)));
    if (d_[v] < before && ctx.round() < rounds_) ctx.broadcast(Message::one(encode_dist(d_[v], sentinel_)));
  }

  Round scheduled_rounds() const override { return rounds_; }

  const WeightedInstance& inst_;
  std::vector<Dist> d_;
  Round rounds_;
  std::uint64_t sentinel_;
};

}  // namespace

InnerResult distributed_bellman_ford(const WeightedInstance& inst, NodeId s, const EngineConfig& cfg) {
  std::size_t n = inst.node_count();
  BellmanFordProtocol proto(inst, s, n - 1, cfg.word_cap);
  InnerResult r;
  r.metrics = run_protocol(*inst.topology, proto, cfg);
  r.dist = std::move(proto.d_);
  return r;
}

}  // namespace dsssp
