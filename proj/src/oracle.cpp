#include "dsssp/oracle.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

namespace dsssp {

Digraph::Digraph(std::size_t n, std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
  std::stable_sort(arcs_.begin(), arcs_.end(),
                   [](const Arc& a, const Arc& b) { return a.tail < b.tail; });
  offsets_.assign(n + 1, 0);
  for (const Arc& a : arcs_) ++offsets_[a.tail + 1];
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
}

Digraph Digraph::from_instance(const WeightedInstance& inst) {
  const auto& t = *inst.topology;
  std::vector<Arc> arcs;
  arcs.reserve(t.channel_count());
  for (ChannelId c = 0; c < t.channel_count(); ++c) arcs.push_back({t.tail(c), t.head(c), inst.weights[c]});
  return Digraph(t.node_count(), std::move(arcs));
}

OracleResult dijkstra(const Digraph& g, NodeId s) {
  const std::size_t n = g.node_count();
  OracleResult r;
  r.dist.assign(n, kInfinity);
  r.hops.assign(n, std::numeric_limits<std::size_t>::max());
  r.parent.assign(n, kNoNode);
  using Key = std::tuple<Dist, std::size_t, NodeId>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
  r.dist[s] = 0;
  r.hops[s] = 0;
  r.parent[s] = s;
  pq.emplace(0, 0, s);
  std::vector<char> done(n, 0);
  while (!pq.empty()) {
    auto [d, h, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (std::size_t i = g.out_begin(u); i < g.out_end(u); ++i) {
      const Arc& a = g.arcs()[i];
      Dist nd = d + a.w;
      std::size_t nh = h + 1;
      if (nd < r.dist[a.head] || (nd == r.dist[a.head] && nh < r.hops[a.head])) {
        r.dist[a.head] = nd;
        r.hops[a.head] = nh;
        r.parent[a.head] = u;
        pq.emplace(nd, nh, a.head);
      }
    }
  }
  return r;
}

OracleResult dijkstra(const WeightedInstance& inst, NodeId s) {
  return dijkstra(Digraph::from_instance(inst), s);
}

std::vector<Dist> bellman_ford(const Digraph& g, NodeId s) {
  std::size_t n = g.node_count();
  return hop_bounded_distances(g, s, n == 0 ? 0 : n - 1);
}

std::vector<Dist> hop_bounded_distances(const Digraph& g, NodeId s, std::size_t h) {
  std::vector<Dist> d(g.node_count(), kInfinity);
  d[s] = 0;
  for (std::size_t round = 0; round < h; ++round) {
    std::vector<Dist> next = d;
    bool changed = false;
    for (const Arc& a : g.arcs()) {
      if (!is_finite(d[a.tail])) continue;
      Dist nd = d[a.tail] + a.w;
      if (nd < next[a.head]) {
        next[a.head] = nd;
        changed = true;
      }
    }
    d.swap(next);
    if (!changed) break;
  }
  return d;
}

std::vector<Dist> hop_bounded_distances(const WeightedInstance& inst, NodeId s, std::size_t h) {
  return hop_bounded_distances(Digraph::from_instance(inst), s, h);
}

std::vector<std::size_t> hop_distances(const Topology& t, NodeId s) {
  std::vector<std::size_t> d(t.node_count(), std::numeric_limits<std::size_t>::max());
  std::queue<NodeId> q;
  d[s] = 0;
  q.push(s);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (NodeId v : t.neighbors(u)) {
      if (d[v] == std::numeric_limits<std::size_t>::max()) {
        d[v] = d[u] + 1;
        q.push(v);
      }
    }
  }
  return d;
}

std::size_t exact_diameter(const Topology& t) {
  std::size_t best = 0;
  for (NodeId v = 0; v < t.node_count(); ++v) {
    auto d = hop_distances(t, v);
    best = std::max(best, *std::max_element(d.begin(), d.end()));
  }
  return best;
}

std::vector<NodeId> canonical_path(const OracleResult& r, NodeId s, NodeId t) {
  std::vector<NodeId> path;
  if (!is_finite(r.dist[t])) return path;
  for (NodeId v = t; v != s; v = r.parent[v]) path.push_back(v);
  path.push_back(s);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace dsssp
