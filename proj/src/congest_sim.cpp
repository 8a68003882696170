#include <algorithm>
#include <cmath>

#include "dsssp/congest_sim.hpp"

namespace dsssp {

std::uint64_t word_cap_for(std::size_t n, Dist lambda) {
  double nn = static_cast<double>(n);
  std::uint64_t cap = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(lambda) + 1;
  std::uint64_t poly = nn * nn * nn * nn > 1e18 ? std::uint64_t{1} << 60
                                                 : static_cast<std::uint64_t>(nn * nn * nn * nn);
  return std::max({cap, poly, std::uint64_t{1} << 16});
}

std::uint64_t encode_dist(Dist d, std::uint64_t sentinel) {
  if (!is_finite(d) || static_cast<std::uint64_t>(d) >= sentinel) return sentinel;
  return static_cast<std::uint64_t>(d);
}

Dist decode_dist(std::uint64_t w, std::uint64_t sentinel) {
  return w >= sentinel ? kInfinity : static_cast<Dist>(w);
}

// ---------------------------------------------------------------------------

const Topology& NodeContext::topology() const { return engine_->topo_; }
std::size_t NodeContext::degree() const { return engine_->topo_.degree(self_); }
NodeId NodeContext::neighbor(std::size_t port) const { return engine_->topo_.neighbors(self_)[port]; }

void NodeContext::send(std::size_t port, const Message& m) { engine_->do_send(self_, port, m); }

void NodeContext::broadcast(const Message& m) {
  std::size_t deg = degree();
  for (std::size_t p = 0; p < deg; ++p) engine_->do_send(self_, p, m);
  ++engine_->metrics_.node_broadcasts[self_];
}

void NodeContext::wake_at(Round r) { engine_->do_wake(self_, r); }

Engine::Engine(const Topology& topology, EngineConfig config) : topo_(topology), cfg_(config) {}

void Engine::do_send(NodeId from, std::size_t port, const Message& m) {
  if (port >= topo_.degree(from)) throw TopologyError("send on nonexistent port");
  ChannelId c = topo_.channel(from, port);
  if (last_send_[c] == now_ + 1)
    throw CapacityViolation("node " + std::to_string(from) + " sent twice on one channel in round " +
                            std::to_string(now_));
  last_send_[c] = now_ + 1;
  for (std::size_t i = 0; i < m.size; ++i) {
    if (m.words[i] > cfg_.word_cap)
      throw PayloadViolation("payload word " + std::to_string(m.words[i]) + " exceeds cap " +
                             std::to_string(cfg_.word_cap));
    metrics_.peak_payload = std::max(metrics_.peak_payload, m.words[i]);
  }
  ++metrics_.edge_messages[c];
  if (cfg_.trace) metrics_.trace.push_back({static_cast<std::uint32_t>(now_), c});
  NodeId to = topo_.head(c);
  if (!next_flag_[to]) {
    next_flag_[to] = 1;
    next_active_.push_back(to);
  }
  next_inbox_[to].push_back({from, topo_.port_of(topo_.reverse(c)), m});
}

void Engine::do_wake(NodeId v, Round r) {
  if (r <= now_) throw Error("wake_at must name a future round");
  wakes_.emplace_back(r, v);
  std::push_heap(wakes_.begin(), wakes_.end(), std::greater<>());
}

RunMetrics Engine::run(Protocol& protocol) {
  const std::size_t n = topo_.node_count();
  metrics_ = RunMetrics::empty(topo_);
  metrics_.seed = cfg_.seed;
  last_send_.assign(topo_.channel_count(), 0);
  next_inbox_.assign(n, {});
  next_flag_.assign(n, 0);
  next_active_.clear();
  wakes_.clear();

  NodeContext ctx;
  ctx.engine_ = this;
  now_ = 0;
  for (NodeId v = 0; v < n; ++v) {
    ctx.self_ = v;
    ctx.round_ = 0;
    ctx.inbox_ = {};
    protocol.init(ctx);
  }

  std::vector<std::vector<Envelope>> inbox(n);
  std::vector<NodeId> active;
  Round last_step = 0;
  while (!next_active_.empty() || !wakes_.empty()) {
    Round r = next_active_.empty() ? wakes_.front().first : now_ + 1;
    if (!wakes_.empty()) r = std::min(r, wakes_.front().first);
    if (r > cfg_.round_cap)
      throw RoundCapExceeded("protocol exceeded round cap " + std::to_string(cfg_.round_cap));
    active.clear();
    if (r == now_ + 1) {
      for (NodeId v : next_active_) {
        inbox[v].swap(next_inbox_[v]);
        next_inbox_[v].clear();
        next_flag_[v] = 0;
        active.push_back(v);
      }
      next_active_.clear();
    }
    while (!wakes_.empty() && wakes_.front().first == r) {
      active.push_back(wakes_.front().second);
      std::pop_heap(wakes_.begin(), wakes_.end(), std::greater<>());
      wakes_.pop_back();
    }
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());
    now_ = r;
    for (NodeId v : active) {
      ctx.self_ = v;
      ctx.round_ = r;
      ctx.inbox_ = inbox[v];
      protocol.step(ctx);
    }
    for (NodeId v : active) inbox[v].clear();
    last_step = r;
  }
  metrics_.rounds = std::max(last_step, protocol.scheduled_rounds());
  return std::move(metrics_);
}

RunMetrics run_protocol(const Topology& topology, Protocol& protocol, const EngineConfig& config) {
  Engine e(topology, config);
  return e.run(protocol);
}

}  // namespace dsssp
