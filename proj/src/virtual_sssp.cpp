#include "dsssp/virtual_sssp.hpp"

#include <algorithm>
#include <cmath>

namespace dsssp {

namespace {

struct BusMark {
  explicit BusMark(const VirtualBus& bus) : bus_(bus), vr_(bus.virtual_rounds()), nr_(bus.metrics().rounds) {}
  void fill(VirtualResult& r) const {
    r.virtual_rounds = bus_.virtual_rounds() - vr_;
    r.network_rounds = bus_.metrics().rounds - nr_;
  }
  const VirtualBus& bus_;
  std::size_t vr_;
  Round nr_;
};

}  // namespace

std::vector<std::uint32_t> sample_subset(std::size_t n, double k, std::uint32_t forced, std::uint64_t seed) {
  std::vector<std::uint32_t> out;
  double p = n == 0 ? 0.0 : std::min(1.0, k / static_cast<double>(n));
  Rng rng(mix_seed(seed, 0x5a3b1e));
  for (std::uint32_t i = 0; i < n; ++i)
    if (rng.unit() < p || i == forced) out.push_back(i);
  return out;
}

VirtualResult small_weight_virtual_sssp(VirtualBus& bus, const VirtualGraph& g, bool check_promise) {
  g.validate();
  BusMark mark(bus);
  const std::size_t nv = g.size();
  const Dist limit = static_cast<Dist>(nv) - 1;
  VirtualAdjacency adj(g);
  VirtualResult res;
  res.dist.assign(nv, kInfinity);
  res.dist[g.source] = 0;
  std::vector<char> sent(nv, 0);
  std::vector<std::size_t> posts_by(nv, 0);
  std::vector<VirtualBus::Post> posts;
  // A virtual round with no broadcast advances i for everyone.
  for (Dist i = 0;;) {
    bool pending = false;
    posts.clear();
    for (std::uint32_t v = 0; v < nv; ++v) {
      Dist d = res.dist[v];
      if (sent[v] || d > limit) continue;
      pending = true;
      if (d <= i) {
        posts.push_back({g.host[v], Message::two(v, encode_dist(d, bus.word_cap()))});
        sent[v] = 1;
        ++posts_by[v];
      }
    }
    if (!pending) break;
    auto got = bus.exchange(posts);
    if (got.empty()) ++i;
    for (const Message& m : got) {
      auto u = static_cast<std::uint32_t>(m[0]);
      Dist du = decode_dist(m[1], bus.word_cap());
      for (std::size_t e = adj.offsets[u]; e < adj.offsets[u + 1]; ++e) {
        auto [x, w] = adj.out[e];
        res.dist[x] = std::min(res.dist[x], add_dist(du, w));
      }
    }
  }
  if (check_promise)
    for (Dist d : res.dist)
      if (is_finite(d) && d > limit) throw PromiseViolation("virtual radius exceeds |V'|-1");
  for (auto c : posts_by) res.broadcasts = std::max(res.broadcasts, c);
  mark.fill(res);
  return res;
}

VirtualResult virtual_scaled(VirtualBus& bus, const VirtualGraph& g, const VirtualSolver& inner) {
  g.validate();
  BusMark mark(bus);
  const std::size_t nv = g.size();
  const int T = bit_width_at_least_one(static_cast<std::uint64_t>(std::max<Dist>(1, g.max_weight())));
  VirtualResult res;
  std::vector<Dist> d(nv, 0);
  std::vector<std::size_t> posts_by(nv, 0);
  std::size_t inner_max = 0;
  VirtualGraph step = g;
  step.radius = static_cast<Dist>(nv) - 1;
  for (int i = 1; i <= T; ++i) {
    std::vector<Dist> known = d;
    if (i >= 2) {
      std::vector<VirtualBus::Post> posts;
      for (std::uint32_t v = 0; v < nv; ++v)
        if (is_finite(d[v])) {
          posts.push_back({g.host[v], Message::two(v, encode_dist(d[v], bus.word_cap()))});
          ++posts_by[v];
        }
      known.assign(nv, kInfinity);
      for (const Message& m : bus.exchange(posts)) known[m[0]] = decode_dist(m[1], bus.word_cap());
    }
    step.edges.clear();
    for (const auto& e : g.edges) {
      if (!is_finite(known[e.tail])) continue;
      if (!is_finite(known[e.head])) throw ConsistencyError("scaling missed a reachable virtual node");
      Dist ell = 2 * known[e.tail] + (e.w >> (T - i)) - 2 * known[e.head];
      if (ell < 0) throw NegativeWeight("negative reweighted virtual edge");
      step.edges.push_back({e.tail, e.head, ell});
    }
    VirtualResult r = inner(step);
    inner_max = std::max(inner_max, r.broadcasts);
    for (std::size_t v = 0; v < nv; ++v)
      d[v] = is_finite(known[v]) && is_finite(r.dist[v]) ? 2 * known[v] + r.dist[v] : kInfinity;
  }
  res.dist = std::move(d);
  std::size_t own = 0;
  for (auto c : posts_by) own = std::max(own, c);
  res.broadcasts = own + inner_max * static_cast<std::size_t>(T);
  mark.fill(res);
  return res;
}

VirtualResult virtual_sssp(VirtualBus& bus, const VirtualGraph& g) {
  return virtual_scaled(bus, g, [&](const VirtualGraph& x) { return small_weight_virtual_sssp(bus, x); });
}

VirtualResult virtual_sssp_gather(VirtualBus& bus, const VirtualGraph& g) {
  g.validate();
  BusMark mark(bus);
  const std::uint64_t nv = g.size();
  std::vector<VirtualBus::Post> posts;
  std::vector<std::size_t> posts_by(nv, 0);
  posts.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    posts.push_back({g.host[e.head], Message::two(e.tail * nv + e.head, encode_dist(e.w, bus.word_cap()))});
    ++posts_by[e.head];
  }
  std::vector<Arc> arcs;
  for (const Message& m : bus.exchange(posts))
    arcs.push_back({static_cast<NodeId>(m[0] / nv), static_cast<NodeId>(m[0] % nv), decode_dist(m[1], bus.word_cap())});
  VirtualResult res;
  res.dist = dijkstra(Digraph(nv, std::move(arcs)), g.source).dist;
  for (auto c : posts_by) res.broadcasts = std::max(res.broadcasts, c);
  mark.fill(res);
  return res;
}

// ---------------------------------------------------------------------------

VirtualShortRange::VirtualShortRange(const VirtualGraph& g, const VirtualAdjacency& adj, std::uint32_t source,
                                     const ShortRangeParams& params)
    : adj_(adj), source_(source), params_(params) {
  params.validate();
  const std::size_t nv = g.size();
  scaled_.assign(nv, kInfinity);
  d_.assign(nv, kInfinity);
  last_sent_.assign(nv, kInfinity);
  bf_count_.assign(nv, 0);
  bfs_sent_.assign(nv, 0);
  scaled_[source] = 0;
}

void VirtualShortRange::emit(std::size_t t, std::vector<std::pair<std::uint32_t, Dist>>& out) {
  const Dist r = static_cast<Dist>(t);
  const Dist B = params_.bfs_steps();
  const Dist q = params_.q;
  const std::size_t nv = scaled_.size();
  if (r <= B) {
    for (std::uint32_t v = 0; v < nv; ++v)
      if (scaled_[v] == r && !bfs_sent_[v]) {
        out.emplace_back(v, r);
        bfs_sent_[v] = 1;
        last_sent_[v] = r;
      }
    return;
  }
  if (r == B + 1)
    for (std::size_t v = 0; v < nv; ++v)
      if (is_finite(scaled_[v])) d_[v] = std::min(d_[v], scaled_[v] / q);
  if (r > B + params_.h) return;
  for (std::uint32_t v = 0; v < nv; ++v)
    if (is_finite(d_[v]) && d_[v] < (is_finite(last_sent_[v]) ? last_sent_[v] / q : kInfinity) &&
        bf_count_[v] < static_cast<std::uint32_t>(params_.bf_budget())) {
      out.emplace_back(v, d_[v]);
      last_sent_[v] = d_[v] * q;
      ++bf_count_[v];
    }
}

void VirtualShortRange::receive(std::size_t t, std::uint32_t origin, Dist value) {
  const Dist arrival = static_cast<Dist>(t) + 1;
  const bool bfs = arrival <= params_.bfs_steps() + 1;
  for (std::size_t e = adj_.offsets[origin]; e < adj_.offsets[origin + 1]; ++e) {
    auto [x, w] = adj_.out[e];
    if (bfs) {
      scaled_[x] = std::min(scaled_[x], add_dist(value, w == 0 ? 1 : params_.q * w));
      if (is_finite(value)) d_[x] = std::min(d_[x], add_dist(value / params_.q, w));
    } else {
      d_[x] = std::min(d_[x], add_dist(value, w));
    }
  }
}

std::vector<std::vector<Dist>> virtualized_short_range(VirtualBus& bus, const VirtualGraph& g,
                                                       const std::vector<std::uint32_t>& sources,
                                                       const ShortRangeParams& params, LockstepStats* stats) {
  VirtualAdjacency adj(g);
  std::vector<VirtualShortRange> algs;
  algs.reserve(sources.size());
  for (auto s : sources) algs.emplace_back(g, adj, s, params);
  std::vector<VirtualProtocol*> ptrs;
  for (auto& a : algs) ptrs.push_back(&a);
  LockstepStats st = run_lockstep(bus, g, ptrs);
  if (stats) *stats = st;
  std::vector<std::vector<Dist>> out;
  for (auto& a : algs) out.push_back(a.result());
  return out;
}

VirtualResult virtual_sssp_nonrecursive(VirtualBus& bus, const VirtualGraph& g, const NonrecursiveOptions& options) {
  g.validate();
  const std::size_t nv = g.size();
  const double d_hat = static_cast<double>(bus.diameter_estimate());
  const double r = static_cast<double>(std::max<Dist>(1, g.radius));
  double k = options.k > 0 ? options.k : static_cast<double>(ceil_param(std::sqrt(d_hat)));
  double q_real = options.q > 0 ? options.q : static_cast<double>(nv) / std::sqrt(r) / std::sqrt(d_hat);
  if (nv <= 2 || k >= static_cast<double>(nv) || q_real < 1) return virtual_sssp_gather(bus, g);

  BusMark mark(bus);
  ShortRangeParams params;
  params.q = ceil_param(q_real);
  params.ell = std::max<Dist>(1, g.radius);
  double log_n = std::log(static_cast<double>(nv));
  params.h = std::clamp<std::int64_t>(ceil_param(options.c_h * static_cast<double>(nv) * log_n / k), 1,
                                      static_cast<std::int64_t>(nv) - 1);
  auto skeleton = sample_subset(nv, k, g.source, options.seed);
  LockstepStats st;
  auto tables = virtualized_short_range(bus, g, skeleton, params, &st);

  VirtualGraph sk;
  std::vector<std::uint32_t> index(nv, UINT32_MAX);
  for (std::uint32_t i = 0; i < skeleton.size(); ++i) {
    index[skeleton[i]] = i;
    sk.host.push_back(g.host[skeleton[i]]);
  }
  sk.source = index[g.source];
  for (std::uint32_t i = 0; i < skeleton.size(); ++i)
    for (std::uint32_t j = 0; j < skeleton.size(); ++j)
      if (i != j && is_finite(tables[i][skeleton[j]])) sk.edges.push_back({i, j, tables[i][skeleton[j]]});
  sk.radius = g.radius;
  VirtualResult top = virtual_sssp_gather(bus, sk);

  VirtualResult res;
  res.dist.assign(nv, kInfinity);
  for (std::size_t i = 0; i < skeleton.size(); ++i)
    for (std::size_t v = 0; v < nv; ++v)
      res.dist[v] = std::min(res.dist[v], add_dist(top.dist[i], tables[i][v]));
  res.broadcasts = st.broadcasts + top.broadcasts;
  mark.fill(res);
  return res;
}

}  // namespace dsssp
