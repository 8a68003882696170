#include "dsssp/short_range.hpp"

#include <algorithm>

namespace dsssp {

void ShortRangeParams::validate() const {
  if (h < 1) throw ParamError("ShortRange needs h >= 1");
  if (ell < 1) throw ParamError("ShortRange needs l >= 1");
  if (q < 1) throw ParamError("ShortRange needs q >= 1");
}

ShortRangeProtocol::ShortRangeProtocol(const WeightedInstance& inst, NodeId source, const ShortRangeParams& params,
                                       std::uint64_t sentinel)
    : inst_(inst), source_(source), params_(params), sentinel_(sentinel) {
  params.validate();
  std::size_t n = inst.node_count();
  scaled_.assign(n, kInfinity);
  d_.assign(n, kInfinity);
  last_sent_.assign(n, kInfinity);
  bfs_count_.assign(n, 0);
  bf_count_.assign(n, 0);
  scaled_[source] = 0;
}

void ShortRangeProtocol::init(NodeContext& ctx) {
  NodeId v = ctx.self();
  if (v != source_) return;
  ctx.broadcast(Message::one(0));
  last_sent_[v] = 0;
  bfs_count_[v] = 1;
  ctx.wake_at(static_cast<Round>(params_.bfs_steps()) + 1);
}

void ShortRangeProtocol::step(NodeContext& ctx) {
  const NodeId v = ctx.self();
  const Dist r = static_cast<Dist>(ctx.round());
  const Dist B = params_.bfs_steps();
  const Dist q = params_.q;

  if (r <= B + 1) {
    // BFS-phase mail: values on the 1/q grid.
    bool was_finite = is_finite(scaled_[v]);
    for (const Envelope& e : ctx.inbox()) {
      Dist w = inst_.weight_into(v, e.port);
      Dist step = w == 0 ? 1 : q * w;
      Dist got = decode_dist(e.msg[0], sentinel_);
      scaled_[v] = std::min(scaled_[v], add_dist(got, step));
      if (is_finite(got)) d_[v] = std::min(d_[v], add_dist(got / q, w));
    }
    if (r <= B && scaled_[v] == r && bfs_count_[v] == 0) {
      ctx.broadcast(Message::one(static_cast<std::uint64_t>(r)));
      last_sent_[v] = r;
      bfs_count_[v] = 1;
    } else if (scaled_[v] > r && scaled_[v] <= B && bfs_count_[v] == 0) {
      ctx.wake_at(static_cast<Round>(scaled_[v]));
    }
    if (!was_finite && is_finite(scaled_[v]) && r < B + 1) ctx.wake_at(static_cast<Round>(B + 1));
    if (r < B + 1) return;
    if (is_finite(scaled_[v])) d_[v] = std::min(d_[v], scaled_[v] / q);
  } else {
    for (const Envelope& e : ctx.inbox())
      d_[v] = std::min(d_[v], add_dist(decode_dist(e.msg[0], sentinel_), inst_.weight_into(v, e.port)));
  }
  // Bellman-Ford iteration r - B (1..h) sends in round r.
  Dist floor_sent = is_finite(last_sent_[v]) ? last_sent_[v] / q : kInfinity;
  if (r <= B + params_.h && is_finite(d_[v]) && d_[v] < floor_sent &&
      bf_count_[v] < static_cast<std::uint32_t>(params_.bf_budget())) {
    ctx.broadcast(Message::one(encode_dist(d_[v], sentinel_)));
    last_sent_[v] = d_[v] * q;
    ++bf_count_[v];
  }
}

std::vector<Dist> ShortRangeProtocol::result() const { return d_; }

ShortRangeResult short_range(const WeightedInstance& inst, NodeId source, const ShortRangeParams& params,
                             const EngineConfig& cfg) {
  ShortRangeProtocol proto(inst, source, params, cfg.word_cap);
  ShortRangeResult r;
  r.metrics = run_protocol(*inst.topology, proto, cfg);
  r.table = {source, proto.result()};
  r.bfs_broadcasts = proto.bfs_broadcasts();
  r.bf_broadcasts = proto.bf_broadcasts();
  return r;
}

ShortRangeManyResult short_range_many(const WeightedInstance& inst, const std::vector<NodeId>& sources,
                                      const ShortRangeParams& params, std::uint64_t seed,
                                      const EngineConfig& cfg, bool keep_solo) {
  if (sources.empty()) throw ParamError("short_range_many needs at least one source");
  params.validate();
  ShortRangeManyResult out;
  EngineConfig solo_cfg = cfg;
  solo_cfg.trace = true;
  std::vector<RunMetrics> solo;
  solo.reserve(sources.size());
  for (NodeId s : sources) {
    ShortRangeProtocol proto(inst, s, params, cfg.word_cap);
    solo.push_back(run_protocol(*inst.topology, proto, solo_cfg));
    out.tables.push_back({s, proto.result()});
  }
  std::vector<const RunMetrics*> ptrs;
  for (auto& m : solo) ptrs.push_back(&m);
  ScheduleOptions so;
  so.seed = seed;
  so.dilation = params.rounds() + 1;
  so.congestion = static_cast<Round>(sources.size()) * static_cast<Round>(1 + params.bf_budget());
  so.keep_trace = cfg.trace;
  out.schedule = schedule_traces(*inst.topology, ptrs, so);
  out.metrics = out.schedule.metrics;
  out.metrics.seed = seed;
  if (keep_solo) out.solo = std::move(solo);
  out.schedule.metrics.trace.clear();
  return out;
}

}  // namespace dsssp
