#include "dsssp/sssp_main.hpp"

#include <algorithm>
#include <cmath>

#include "dsssp/oracle.hpp"

namespace dsssp {

void MainParams::validate() const {
  if (k < 1 || h < 1 || ell < 1 || q < 1) throw ParamError("k, h, l and q must be at least 1");
}

std::vector<NodeId> sample_virtual_nodes(std::size_t n, double k, NodeId s, std::uint64_t seed) {
  if (s >= n) throw ParamError("source out of range");
  auto picked = sample_subset(n, k, s, seed);
  return {picked.begin(), picked.end()};
}

// ---------------------------------------------------------------------------
// Extend

ExtendProtocol::ExtendProtocol(const WeightedInstance& inst, std::vector<Dist>& d, std::vector<Dist>& last_sent,
                               std::int64_t h, std::int64_t ell, std::int64_t bucket, bool unrestricted,
                               std::uint64_t sentinel)
    : inst_(inst), d_(d), last_(last_sent), h_(h), ell_(ell), bucket_(bucket), unrestricted_(unrestricted),
      sentinel_(sentinel) {}

void ExtendProtocol::init(NodeContext& ctx) {
  if (h_ > 0) offer(ctx);
}

void ExtendProtocol::step(NodeContext& ctx) {
  const NodeId v = ctx.self();
  Dist before = d_[v];
  for (const Envelope& e : ctx.inbox())
    d_[v] = std::min(d_[v], add_dist(decode_dist(e.msg[0], sentinel_), inst_.weight_into(v, e.port)));
  if (d_[v] < before && static_cast<std::int64_t>(ctx.round()) < h_) offer(ctx);
}

void ExtendProtocol::offer(NodeContext& ctx) {
  const NodeId u = ctx.self();
  const Dist du = d_[u];
  if (!is_finite(du)) return;
  const Topology& t = *inst_.topology;
  const Dist lo = bucket_ * ell_, hi = (bucket_ + 1) * ell_;
  for (std::size_t p = 0; p < ctx.degree(); ++p) {
    ChannelId c = t.channel(u, p);
    Dist sum = du + inst_.weights[c];
    if ((unrestricted_ || (sum >= lo && sum < hi)) && last_[c] != du) {
      ctx.send(p, Message::one(encode_dist(du, sentinel_)));
      last_[c] = du;
    }
  }
}

RunMetrics extend(const WeightedInstance& inst, std::vector<Dist>& d, std::vector<Dist>& last_sent, std::int64_t h,
                  std::int64_t ell, std::int64_t bucket, const EngineConfig& cfg, bool unrestricted) {
  if (last_sent.size() != inst.weights.size()) throw Error("extend needs one last-sent entry per channel");
  ExtendProtocol proto(inst, d, last_sent, h, ell, bucket, unrestricted, cfg.word_cap);
  return run_protocol(*inst.topology, proto, cfg);
}

// ---------------------------------------------------------------------------
// SmallWeightSSSP

SmallWeightResult small_weight_sssp(const WeightedInstance& inst, NodeId s, const std::vector<Dist>& approx,
                                    const MainParams& params, const SmallWeightOptions& options,
                                    const EngineConfig& cfg) {
  params.validate();
  const Topology& topo = *inst.topology;
  const std::size_t n = inst.node_count();
  if (approx.size() != n) throw ParamError("approximate table has the wrong size");
  SmallWeightResult out;
  out.metrics = RunMetrics::empty(topo);
  out.metrics.seed = options.seed;

  out.virtual_nodes = sample_virtual_nodes(n, static_cast<double>(params.k), s, options.seed);
  const auto& vn = out.virtual_nodes;
  const std::size_t nv = vn.size();
  ShortRangeParams sp{params.h, params.ell, params.q};
  auto many = short_range_many(inst, vn, sp, mix_seed(options.seed, 7), cfg);
  out.metrics.append(many.metrics);

  // Virtual graph G' as an adjacency matrix over V'.
  std::vector<Dist> wv(nv * nv, kInfinity);
  std::uint32_t s_index = 0;
  for (std::uint32_t a = 0; a < nv; ++a) {
    if (vn[a] == s) s_index = a;
    for (std::uint32_t b = 0; b < nv; ++b)
      if (a != b) wv[a * nv + b] = many.tables[a].dist[vn[b]];
  }

  BfsTree own;
  const BfsTree* tree = options.tree;
  if (!tree) {
    RunMetrics m;
    own = build_bfs_tree(topo, 0, &m);
    out.metrics.append(m);
    tree = &own;
  }
  VirtualBus bus(topo, *tree, cfg.word_cap, cfg.trace);

  out.virtual_edge_messages.assign(topo.channel_count(), 0);
  std::vector<Dist>& d = out.dist;
  d.assign(n, kInfinity);
  d[s] = 0;
  std::vector<Dist> last(inst.weights.size(), kInfinity);
  const std::int64_t ell = params.ell;
  const std::int64_t buckets = static_cast<std::int64_t>(n) / ell;
  for (std::int64_t i = 0; i <= buckets; ++i) {
    out.metrics.append(extend(inst, d, last, params.h, ell, i, cfg, options.plain_bellman_ford));

    std::vector<std::uint32_t> members;
    for (std::uint32_t a = 0; a < nv; ++a)
      if (a != s_index && is_finite(approx[vn[a]]) && approx[vn[a]] >= i * ell && approx[vn[a]] < (i + 2) * ell)
        members.push_back(a);
    if (!members.empty()) {
      VirtualGraph b;
      b.host.push_back(s);
      b.source = 0;
      b.radius = static_cast<Dist>(n) - 1;
      for (std::uint32_t x = 0; x < members.size(); ++x) {
        std::uint32_t a = members[x];
        b.host.push_back(vn[a]);
        Dist w = std::min(d[vn[a]], wv[s_index * nv + a]);
        if (is_finite(w)) b.edges.push_back({0, x + 1, w});
        for (std::uint32_t y = 0; y < members.size(); ++y) {
          Dist wy = wv[members[y] * nv + a];
          if (y != x && is_finite(wy)) b.edges.push_back({y + 1, x + 1, wy});
        }
      }
      VirtualResult r = solve_virtual(bus, b, params.variant, mix_seed(options.seed, 1000 + i));
      for (std::uint32_t x = 0; x < members.size(); ++x) {
        NodeId v = vn[members[x]];
        d[v] = std::min(d[v], r.dist[x + 1]);
      }
      RunMetrics vm = bus.take_metrics();
      for (std::size_t c = 0; c < vm.edge_messages.size(); ++c) out.virtual_edge_messages[c] += vm.edge_messages[c];
      out.metrics.append(vm);
      ++out.buckets_solved;
    }

    out.metrics.append(extend(inst, d, last, params.h, ell, i, cfg, options.plain_bellman_ford));

    if (options.check_against) {
      const auto& truth = *options.check_against;
      for (std::size_t v = 0; v < n; ++v) {
        if (d[v] < truth[v]) throw ConsistencyError("estimate below the true distance");
        if (truth[v] < (i + 1) * ell && d[v] != truth[v])
          throw ConsistencyError("bucket " + std::to_string(i) + " left node " + std::to_string(v) + " unsettled");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parameters

MainParams choose_parameters(std::size_t n, std::size_t d_hat, ParamRegime regime, std::size_t kappa, double c_h) {
  const double N = static_cast<double>(std::max<std::size_t>(n, 2));
  const double D = static_cast<double>(std::max<std::size_t>(d_hat, 1));
  const double K = static_cast<double>(std::max<std::size_t>(kappa, 1));
  double k = 1, ell = 1, q = 1;
  switch (regime) {
    case ParamRegime::base:
      k = std::pow(N, 0.75) * std::pow(D, -0.75);
      ell = std::sqrt(N * D);
      q = std::pow(N, 0.25) * std::pow(D, -0.25);
      break;
    case ParamRegime::gather:
      k = std::pow(K, -2.0 / 7) * std::pow(N, 3.0 / 7);
      ell = std::pow(K, -0.5) * std::pow(N, 5.0 / 7);
      q = std::pow(K, 4.0 / 7) * std::pow(N, 1.0 / 7);
      break;
    case ParamRegime::virtualizing:
      k = std::pow(N, 0.75) / std::sqrt(D);
      ell = std::pow(K, -1.0 / 3) * std::sqrt(N) * std::cbrt(D);
      q = std::pow(K, 2.0 / 3) * std::pow(N, 0.25) * std::pow(D, -1.0 / 6);
      break;
    case ParamRegime::multi_source_low:
      k = std::pow(N, 0.75) / std::sqrt(K);
      ell = std::sqrt(N);
      q = std::sqrt(N / K);
      break;
  }
  MainParams p;
  p.c_h = c_h;
  p.k = std::clamp<std::int64_t>(ceil_param(k), 1, static_cast<std::int64_t>(std::max<std::size_t>(n, 1)));
  p.ell = std::max<std::int64_t>(1, ceil_param(ell));
  p.q = std::max<std::int64_t>(1, ceil_param(q));
  p.h = std::clamp<std::int64_t>(ceil_param(c_h * N * std::log(N) / static_cast<double>(p.k)), 1,
                                 std::max<std::int64_t>(1, static_cast<std::int64_t>(n) - 1));
  return p;
}

MainParams plan_parameters(std::size_t n, std::size_t d_hat, std::size_t kappa,
                           const std::optional<VirtualVariant>& override_variant, double c_h) {
  VirtualVariant v;
  if (override_variant) {
    v = *override_variant;
  } else {
    auto nv = static_cast<std::size_t>(choose_parameters(n, d_hat, ParamRegime::virtualizing, kappa, c_h).k);
    v = select_virtual_variant(n, nv, d_hat, kappa);
  }
  ParamRegime regime = ParamRegime::virtualizing;
  if (v.kind == VariantKind::queue) regime = kappa > 1 ? ParamRegime::multi_source_low : ParamRegime::base;
  if (v.kind == VariantKind::gather) regime = ParamRegime::gather;
  MainParams p = choose_parameters(n, d_hat, regime, kappa, c_h);
  p.variant = v;
  return p;
}

// ---------------------------------------------------------------------------
// Main

namespace {

InnerResult solve_iteration(const WeightedInstance& sub, NodeId s, const MainParams& params, const BfsTree& tree,
                            const MainOptions& options, std::uint64_t seed, const EngineConfig& cfg,
                            std::vector<std::uint64_t>* outside_virtual = nullptr) {
  const std::size_t n = sub.node_count();
  AdditiveOptions ao;
  ao.seed = mix_seed(seed, 1);
  ao.c_h = params.c_h;
  ao.radius = static_cast<Dist>(n) - 1;
  ao.tree = &tree;
  auto approx = additive_sssp(sub, s, params.ell, static_cast<double>(params.k), ao, cfg);
  SmallWeightOptions so;
  so.seed = mix_seed(seed, 2);
  so.tree = &tree;
  so.plain_bellman_ford = options.plain_bellman_ford;
  auto sw = small_weight_sssp(sub, s, approx.dist, params, so, cfg);
  if (outside_virtual) {
    outside_virtual->assign(sub.topology->channel_count(), 0);
    auto at = [](const std::vector<std::uint64_t>& v, std::size_t c) { return c < v.size() ? v[c] : 0; };
    for (std::size_t c = 0; c < outside_virtual->size(); ++c)
      (*outside_virtual)[c] =
          at(approx.metrics.edge_messages, c) + at(sw.metrics.edge_messages, c) - at(sw.virtual_edge_messages, c);
  }
  InnerResult r;
  r.metrics = std::move(approx.metrics);
  r.metrics.append(sw.metrics);
  r.dist = std::move(sw.dist);
  return r;
}

void compare(const std::vector<Dist>& got, const std::vector<Dist>& truth, bool& flagged, std::string& failure) {
  for (std::size_t v = 0; v < got.size(); ++v) {
    if (got[v] == truth[v]) continue;
    flagged = true;
    if (failure.empty())
      failure = std::string(got[v] < truth[v] ? "underestimate" : "mismatch") + " at node " + std::to_string(v);
  }
}

}  // namespace

MainResult main_sssp(const WeightedInstance& inst, NodeId s, const MainOptions& options, const EngineConfig& cfg) {
  const Topology& topo = *inst.topology;
  const std::size_t n = inst.node_count();
  if (s >= n) throw ParamError("source out of range");
  MainResult out;
  out.table.source = s;
  RunMetrics tree_metrics;
  BfsTree tree = build_bfs_tree(topo, 0, &tree_metrics);
  out.metrics = std::move(tree_metrics);
  out.metrics.seed = options.seed;
  out.d_hat = estimate_diameter(tree);
  out.params = plan_parameters(n, out.d_hat, 1, options.variant, options.c_h);
  if (n == 1) {
    out.table.dist = {0};
    return out;
  }

  ScalingOptions so;
  so.observer = options.observer;
  so.engine = cfg;
  auto inner = [&](const WeightedInstance& sub, int i) {
    return solve_iteration(sub, s, out.params, tree, options, mix_seed(options.seed, static_cast<std::uint64_t>(i)),
                           cfg);
  };
  try {
    ScalingResult sr = run_scaling(inst, s, inner, so);
    out.metrics.append(sr.metrics);
    out.iterations = sr.iterations;
    out.table.dist = std::move(sr.table.dist);
  } catch (const NegativeWeight& e) {
    out.flagged = true;
    out.failure = std::string("negative reweighted edge: ") + e.what();
  } catch (const ConsistencyError& e) {
    out.flagged = true;
    out.failure = std::string("inconsistency: ") + e.what();
  }
  if (out.table.dist.empty()) out.table.dist.assign(n, kInfinity);
  out.table.dist[s] = 0;
  if (options.oracle_check) compare(out.table.dist, dijkstra(inst, s).dist, out.flagged, out.failure);
  return out;
}

MultiSourceResult multi_source_sssp(const WeightedInstance& inst, const std::vector<NodeId>& sources,
                                    const MainOptions& options, const EngineConfig& cfg) {
  const Topology& topo = *inst.topology;
  const std::size_t n = inst.node_count();
  const std::size_t kappa = sources.size();
  if (kappa == 0 || kappa > n) throw ParamError("need between 1 and n sources");
  for (NodeId s : sources)
    if (s >= n) throw ParamError("source out of range");

  MultiSourceResult out;
  RunMetrics tree_metrics;
  BfsTree tree = build_bfs_tree(topo, 0, &tree_metrics);
  out.metrics = std::move(tree_metrics);
  out.metrics.seed = options.seed;
  out.d_hat = estimate_diameter(tree);
  out.params = plan_parameters(n, out.d_hat, kappa, options.variant, options.c_h);
  out.flagged.assign(kappa, false);
  std::vector<std::vector<Dist>> d(kappa, std::vector<Dist>(n, 0));
  std::vector<char> alive(kappa, 1);

  const int T = scaling_iterations(inst.lambda);
  EngineConfig traced = cfg;
  traced.trace = true;
  std::vector<Dist> w_i(topo.channel_count());
  for (int i = 1; i <= T; ++i) {
    for (ChannelId c = 0; c < topo.channel_count(); ++c) w_i[c] = weight_prefix(inst.weights[c], i, T);
    std::vector<RunMetrics> solo;
    std::vector<std::size_t> who;
    std::vector<std::vector<Dist>> inner(kappa);
    std::vector<std::uint64_t> outside(topo.channel_count(), 0), mine;
    for (std::size_t j = 0; j < kappa; ++j) {
      if (!alive[j]) continue;
      try {
        std::vector<Dist> ell = w_i;
        if (i > 1) {
          auto rw = distributed_reweight(topo, d[j], w_i, cfg);
          out.metrics.append(rw.metrics);
          ell = std::move(rw.weights);
        }
        WeightedInstance sub = inst.with_weights(ell);
        sub.sources = {sources[j]};
        auto r = solve_iteration(sub, sources[j], out.params, tree, options,
                                 mix_seed(mix_seed(options.seed, j), static_cast<std::uint64_t>(i)), traced, &mine);
        for (std::size_t c = 0; c < outside.size(); ++c) outside[c] += mine[c];
        solo.push_back(std::move(r.metrics));
        who.push_back(j);
        inner[j] = std::move(r.dist);
      } catch (const Error& e) {
        if (!dynamic_cast<const NegativeWeight*>(&e) && !dynamic_cast<const ConsistencyError*>(&e)) throw;
        alive[j] = 0;
        out.flagged[j] = true;
        if (out.failure.empty()) out.failure = "source " + std::to_string(sources[j]) + ": " + e.what();
      }
    }
    out.iteration_congestion.push_back(outside.empty() ? 0 : *std::max_element(outside.begin(), outside.end()));
    if (!solo.empty()) {
      std::vector<const RunMetrics*> ptrs;
      for (auto& m : solo) ptrs.push_back(&m);
      ScheduleOptions sched;
      sched.seed = mix_seed(options.seed, 0x900 + static_cast<std::uint64_t>(i));
      sched.keep_trace = cfg.trace;
      auto composite = schedule_traces(topo, ptrs, sched);
      out.metrics.append(composite.metrics);
    }
    for (std::size_t j : who)
      for (std::size_t v = 0; v < n; ++v) d[j][v] = add_dist(2 * d[j][v], inner[j][v]);
  }

  for (std::size_t j = 0; j < kappa; ++j) {
    if (!alive[j]) d[j].assign(n, kInfinity);
    d[j][sources[j]] = 0;
    if (options.oracle_check) {
      std::string msg;
      bool bad = false;
      compare(d[j], dijkstra(inst, sources[j]).dist, bad, msg);
      if (bad) {
        out.flagged[j] = true;
        if (out.failure.empty()) out.failure = "source " + std::to_string(sources[j]) + ": " + msg;
      }
    }
    out.tables.push_back({sources[j], std::move(d[j])});
  }
  return out;
}

}  // namespace dsssp
