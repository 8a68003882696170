#include "dsssp/approx_sssp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "dsssp/oracle.hpp"

namespace dsssp {

namespace {

using i128 = __int128;

Dist ceil_frac(i128 a, i128 b) {
  i128 q = (a + b - 1) / b;
  return q >= kInfinity ? kInfinity : static_cast<Dist>(q);
}

Dist level_units(Dist d, int level) {
  if (!is_finite(d)) return kInfinity;
  return level == 0 ? 0 : d << (level - 1);
}

// W * eps/h <= (1 + eps) * radius
bool within_radius(Dist units, const BoundedHopParams& p) {
  return is_finite(units) &&
         static_cast<i128>(units) * p.eps.num <= static_cast<i128>(p.eps.den + p.eps.num) * p.radius * p.h;
}

}  // namespace

void BoundedHopParams::validate() const {
  if (h < 1) throw ParamError("bounded-hop needs h >= 1");
  if (eps.num < 1 || eps.den < 1 || eps.num > eps.den) throw ParamError("bounded-hop needs 0 < eps <= 1");
  if (radius < 1) throw ParamError("bounded-hop needs a positive radius bound");
}

int BoundedHopParams::levels() const { return std::max(1, ceil_log2(static_cast<std::uint64_t>(radius))); }

std::int64_t BoundedHopParams::cap() const { return h + ceil_div(2 * h * eps.den, eps.num); }

Dist level_weight(Dist w, int i, const BoundedHopParams& p) {
  i128 a = static_cast<i128>(2) * p.h * w * p.eps.den;
  i128 b = static_cast<i128>(p.eps.num) << i;
  return std::max<Dist>(1, ceil_frac(a, b));
}

Dist units_to_dist(Dist units, const BoundedHopParams& p) {
  if (!is_finite(units)) return kInfinity;
  return ceil_frac(static_cast<i128>(units) * p.eps.num, static_cast<i128>(p.eps.den) * p.h);
}

// ---------------------------------------------------------------------------

BoundedDistanceProtocol::BoundedDistanceProtocol(const WeightedInstance& inst, NodeId source,
                                                 std::vector<Dist> level_weights, Dist cap, Round deadline,
                                                 std::uint64_t sentinel)
    : inst_(inst), source_(source), w_(std::move(level_weights)), cap_(cap), deadline_(deadline), sentinel_(sentinel) {
  d_.assign(inst.node_count(), kInfinity);
  sent_.assign(inst.node_count(), 0);
  d_[source] = 0;
}

void BoundedDistanceProtocol::init(NodeContext& ctx) {
  if (ctx.self() != source_) return;
  ctx.broadcast(Message::one(0));
  sent_[source_] = 1;
}

void BoundedDistanceProtocol::step(NodeContext& ctx) {
  const NodeId v = ctx.self();
  const Dist r = static_cast<Dist>(ctx.round());
  const Topology& t = *inst_.topology;
  for (const Envelope& e : ctx.inbox()) {
    Dist w = w_[t.reverse(t.channel(v, e.port))];
    Dist cand = add_dist(decode_dist(e.msg[0], sentinel_), w);
    if (cand <= cap_) d_[v] = std::min(d_[v], cand);
  }
  if (sent_[v] || !is_finite(d_[v]) || r > static_cast<Dist>(deadline_)) return;
  if (d_[v] <= r) {
    ctx.broadcast(Message::one(encode_dist(d_[v], sentinel_)));
    sent_[v] = 1;
  } else if (d_[v] <= static_cast<Dist>(deadline_)) {
    ctx.wake_at(static_cast<Round>(d_[v]));
  }
}

BoundedHopResult bounded_hop_many(const WeightedInstance& inst, const std::vector<NodeId>& sources,
                                  const BoundedHopParams& params, std::uint64_t seed, const EngineConfig& cfg) {
  params.validate();
  if (sources.empty()) throw ParamError("bounded_hop_many needs at least one source");
  const Topology& topo = *inst.topology;
  const std::size_t n = inst.node_count();
  const int L = params.levels();
  const Dist cap = params.cap();

  std::vector<std::vector<Dist>> weights(L + 1, std::vector<Dist>(inst.weights.size(), kInfinity));
  for (std::size_t c = 0; c < inst.weights.size(); ++c) {
    if (inst.weights[c] == 0) weights[0][c] = 0;
    for (int i = 1; i <= L; ++i) {
      Dist w = level_weight(inst.weights[c], i, params);
      if (w <= cap) weights[i][c] = w;
    }
  }

  BoundedHopResult out;
  EngineConfig solo_cfg = cfg;
  solo_cfg.trace = true;
  std::vector<RunMetrics> solo;
  for (NodeId s : sources) {
    BoundedHopTable table{s, std::vector<Dist>(n, kInfinity)};
    for (int i = 0; i <= L; ++i) {
      Dist level_cap = i == 0 ? 0 : cap;
      Round deadline = i == 0 ? static_cast<Round>(params.h - 1) : static_cast<Round>(cap);
      BoundedDistanceProtocol proto(inst, s, weights[i], level_cap, deadline, cfg.word_cap);
      solo.push_back(run_protocol(topo, proto, solo_cfg));
      for (std::size_t v = 0; v < n; ++v) table.units[v] = std::min(table.units[v], level_units(proto.result()[v], i));
      for (auto b : proto.broadcasts()) out.max_broadcasts_per_run = std::max(out.max_broadcasts_per_run, b);
    }
    out.tables.push_back(std::move(table));
  }
  std::vector<const RunMetrics*> ptrs;
  for (auto& m : solo) ptrs.push_back(&m);
  ScheduleOptions so;
  so.seed = seed;
  so.dilation = static_cast<Round>(std::max<Dist>(params.h, cap + 1));
  so.congestion = static_cast<Round>(solo.size());
  so.keep_trace = cfg.trace;
  out.schedule = schedule_traces(topo, ptrs, so);
  out.metrics = out.schedule.metrics;
  out.metrics.seed = seed;
  out.schedule.metrics.trace.clear();
  return out;
}

BoundedHopResult bounded_hop(const WeightedInstance& inst, NodeId source, const BoundedHopParams& params,
                             const EngineConfig& cfg) {
  return bounded_hop_many(inst, {source}, params, cfg.seed, cfg);
}

AdditiveResult additive_sssp(const WeightedInstance& inst, NodeId s, Dist alpha, double k,
                             const AdditiveOptions& options, const EngineConfig& cfg) {
  const std::size_t n = inst.node_count();
  if (s >= n) throw ParamError("source out of range");
  if (alpha < 1) throw ParamError("additive SSSP needs alpha >= 1");
  if (!(k > 0)) throw ParamError("additive SSSP needs k > 0");
  const Topology& topo = *inst.topology;
  AdditiveResult out;
  out.metrics = RunMetrics::empty(topo);
  out.metrics.seed = options.seed;
  if (n == 1) {
    out.dist = {0};
    out.skeleton = {s};
    return out;
  }

  BoundedHopParams& p = out.params;
  const Dist span = 2 * static_cast<Dist>(n - 1);
  p.eps = alpha >= span ? Fraction{1, 1} : Fraction{alpha, span};
  p.radius = options.radius > 0 ? options.radius : static_cast<Dist>(n - 1);
  double log_n = std::log(static_cast<double>(n));
  p.h = std::clamp<std::int64_t>(ceil_param(options.c_h * static_cast<double>(n) * log_n / k), 1,
                                 static_cast<std::int64_t>(n) - 1);

  auto picked = sample_subset(n, k, s, mix_seed(options.seed, 1));
  out.skeleton.assign(picked.begin(), picked.end());
  EngineConfig hop_cfg = cfg;
  auto hop = bounded_hop_many(inst, out.skeleton, p, mix_seed(options.seed, 2), hop_cfg);
  out.metrics = hop.metrics;

  BfsTree own;
  const BfsTree* tree = options.tree;
  if (!tree) {
    RunMetrics m;
    own = build_bfs_tree(topo, 0, &m);
    out.metrics.append(m);
    tree = &own;
  }

  // Skeleton distances are rescaled to units U' = alpha / (2J), where J
  // bounds the number of skeleton hops on a shortest path.
  const std::int64_t J = 2 * ceil_div(static_cast<std::int64_t>(n - 1), p.h) + 2;
  const std::size_t ks = out.skeleton.size();
  std::uint32_t src_index = 0;
  VirtualGraph sk;
  for (std::uint32_t i = 0; i < ks; ++i) {
    sk.host.push_back(out.skeleton[i]);
    if (out.skeleton[i] == s) src_index = i;
  }
  sk.source = src_index;
  for (std::uint32_t i = 0; i < ks; ++i)
    for (std::uint32_t j = 0; j < ks; ++j) {
      Dist W = hop.tables[i].units[out.skeleton[j]];
      if (i == j || !within_radius(W, p)) continue;
      Dist w = ceil_frac(static_cast<i128>(W) * p.eps.num * 2 * J, static_cast<i128>(p.eps.den) * p.h * alpha);
      sk.edges.push_back({i, j, w});
    }
  sk.radius = ceil_frac(static_cast<i128>(p.eps.den + p.eps.num) * p.radius * 2 * J,
                        static_cast<i128>(p.eps.den) * alpha);

  VirtualBus bus(topo, *tree, cfg.word_cap, cfg.trace);
  VirtualResult top = virtual_sssp(bus, sk);
  std::vector<VirtualBus::Post> posts;
  for (std::uint32_t i = 0; i < ks; ++i)
    if (is_finite(top.dist[i]))
      posts.push_back({sk.host[i], Message::two(i, encode_dist(top.dist[i], bus.word_cap()))});
  std::vector<Dist> delta(ks, kInfinity);
  for (const Message& m : bus.exchange(posts)) delta[m[0]] = decode_dist(m[1], bus.word_cap());
  RunMetrics bm = bus.take_metrics();
  out.metrics.append(bm);

  // d~(v) = ceil(min_u delta(u) U' + W_u(v) U) over the common denominator.
  const i128 denom = static_cast<i128>(2) * J * p.eps.den * p.h;
  out.dist.assign(n, kInfinity);
  for (std::size_t v = 0; v < n; ++v) {
    i128 best = -1;
    for (std::size_t i = 0; i < ks; ++i) {
      Dist W = hop.tables[i].units[v];
      if (!is_finite(delta[i]) || !is_finite(W)) continue;
      i128 val = static_cast<i128>(delta[i]) * alpha * p.eps.den * p.h + static_cast<i128>(W) * p.eps.num * 2 * J;
      if (best < 0 || val < best) best = val;
    }
    if (best >= 0) out.dist[v] = ceil_frac(best, denom);
  }
  out.dist[s] = 0;
  return out;
}

// ---------------------------------------------------------------------------

VirtualBoundedDistance::VirtualBoundedDistance(const VirtualAdjacency& adj, std::size_t n, std::uint32_t source,
                                               Dist cap, std::size_t deadline)
    : adj_(adj), cap_(cap), deadline_(deadline) {
  d_.assign(n, kInfinity);
  sent_.assign(n, 0);
  d_[source] = 0;
  ready_.emplace_back(0, source);
}

void VirtualBoundedDistance::emit(std::size_t t, std::vector<std::pair<std::uint32_t, Dist>>& out) {
  const Dist now = static_cast<Dist>(t);
  while (!ready_.empty() && ready_.front().first <= now) {
    std::pop_heap(ready_.begin(), ready_.end(), std::greater<>());
    auto [d, v] = ready_.back();
    ready_.pop_back();
    if (sent_[v] || d != d_[v]) continue;
    out.emplace_back(v, d);
    sent_[v] = 1;
  }
}

void VirtualBoundedDistance::receive(std::size_t, std::uint32_t origin, Dist value) {
  for (std::size_t e = adj_.offsets[origin]; e < adj_.offsets[origin + 1]; ++e) {
    auto [x, w] = adj_.out[e];
    Dist cand = add_dist(value, w);
    if (cand > cap_ || cand >= d_[x] || sent_[x]) continue;
    d_[x] = cand;
    ready_.emplace_back(cand, x);
    std::push_heap(ready_.begin(), ready_.end(), std::greater<>());
  }
}

std::vector<BoundedHopTable> virtual_bounded_hop_many(VirtualBus& bus, const VirtualGraph& g,
                                                      const std::vector<std::uint32_t>& sources,
                                                      const BoundedHopParams& params, LockstepStats* stats) {
  params.validate();
  const int L = params.levels();
  const Dist cap = params.cap();
  const std::size_t nv = g.size();
  std::vector<VirtualGraph> level_graphs(L + 1);
  for (int i = 0; i <= L; ++i) {
    level_graphs[i].host = g.host;
    for (const auto& e : g.edges) {
      if (i == 0) {
        if (e.w == 0) level_graphs[i].edges.push_back(e);
      } else if (Dist w = level_weight(e.w, i, params); w <= cap) {
        level_graphs[i].edges.push_back({e.tail, e.head, w});
      }
    }
  }
  std::vector<VirtualAdjacency> adj;
  adj.reserve(L + 1);
  for (auto& lg : level_graphs) adj.emplace_back(lg);

  std::vector<VirtualBoundedDistance> algs;
  algs.reserve(sources.size() * (L + 1));
  for (auto s : sources)
    for (int i = 0; i <= L; ++i)
      algs.emplace_back(adj[i], nv, s, i == 0 ? 0 : cap,
                        i == 0 ? static_cast<std::size_t>(params.h - 1) : static_cast<std::size_t>(cap));
  std::vector<VirtualProtocol*> ptrs;
  for (auto& a : algs) ptrs.push_back(&a);
  LockstepStats st = run_lockstep(bus, g, ptrs);
  if (stats) *stats = st;

  std::vector<BoundedHopTable> out;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    BoundedHopTable t{sources[k], std::vector<Dist>(nv, kInfinity)};
    for (int i = 0; i <= L; ++i) {
      const auto& d = algs[k * (L + 1) + i].result();
      for (std::size_t v = 0; v < nv; ++v) t.units[v] = std::min(t.units[v], level_units(d[v], i));
    }
    out.push_back(std::move(t));
  }
  return out;
}

VirtualApprox virtual_approx_sssp(VirtualBus& bus, const VirtualGraph& g, Fraction eps, Dist radius, double k,
                                  std::uint64_t seed, double c_h) {
  g.validate();
  const std::size_t nv = g.size();
  VirtualApprox out;
  if (nv <= 2 || k >= static_cast<double>(nv)) {
    out.units = virtual_sssp_gather(bus, g).dist;
    out.unit = {1, 1};
    out.skeleton_size = nv;
    return out;
  }
  BoundedHopParams p;
  p.eps = eps;
  p.radius = std::max<Dist>(1, radius);
  double log_n = std::log(static_cast<double>(nv));
  p.h = std::clamp<std::int64_t>(ceil_param(c_h * static_cast<double>(nv) * log_n / k), 1,
                                 static_cast<std::int64_t>(nv) - 1);
  p.validate();
  auto skeleton = sample_subset(nv, k, g.source, seed);
  auto tables = virtual_bounded_hop_many(bus, g, skeleton, p);

  VirtualGraph sk;
  for (std::uint32_t i = 0; i < skeleton.size(); ++i) {
    sk.host.push_back(g.host[skeleton[i]]);
    if (skeleton[i] == g.source) sk.source = i;
  }
  for (std::uint32_t i = 0; i < skeleton.size(); ++i)
    for (std::uint32_t j = 0; j < skeleton.size(); ++j) {
      Dist W = tables[i].units[skeleton[j]];
      if (i != j && within_radius(W, p)) sk.edges.push_back({i, j, W});
    }
  auto delta = virtual_sssp_gather(bus, sk).dist;

  out.units.assign(nv, kInfinity);
  for (std::size_t i = 0; i < skeleton.size(); ++i)
    for (std::size_t v = 0; v < nv; ++v)
      out.units[v] = std::min(out.units[v], add_dist(delta[i], tables[i].units[v]));
  out.units[g.source] = 0;
  out.unit = {eps.num, eps.den * p.h};
  out.skeleton_size = skeleton.size();
  return out;
}

std::vector<Dist> virtual_additive_sssp(VirtualBus& bus, const VirtualGraph& g, Dist ell, Dist r, double k,
                                        std::uint64_t seed, double c_h) {
  if (ell < 1 || r < 1) throw ParamError("virtual additive SSSP needs ell, r >= 1");
  Fraction eps = ell >= r ? Fraction{1, 1} : Fraction{ell, r};
  VirtualApprox a = virtual_approx_sssp(bus, g, eps, r, k, seed, c_h);
  std::vector<Dist> out(a.units.size(), kInfinity);
  for (std::size_t v = 0; v < out.size(); ++v)
    if (is_finite(a.units[v]))
      out[v] = ceil_frac(static_cast<i128>(a.units[v]) * a.unit.num, static_cast<i128>(a.unit.den));
  return out;
}

}  // namespace dsssp
