#include "dsssp/virtual_graph.hpp"

#include <algorithm>

namespace dsssp {

Dist VirtualGraph::max_weight() const {
  Dist m = 0;
  for (const auto& e : edges) m = std::max(m, e.w);
  return m;
}

Digraph VirtualGraph::to_digraph() const {
  std::vector<Arc> arcs;
  arcs.reserve(edges.size());
  for (const auto& e : edges) arcs.push_back({e.tail, e.head, e.w});
  return Digraph(size(), std::move(arcs));
}

void VirtualGraph::validate() const {
  if (source >= size()) throw InfeasibleSpec("virtual source out of range");
  for (const auto& e : edges) {
    if (e.tail >= size() || e.head >= size()) throw InfeasibleSpec("virtual edge endpoint out of range");
    if (e.w < 0) throw InfeasibleSpec("negative virtual edge weight");
  }
}

VirtualAdjacency::VirtualAdjacency(const VirtualGraph& g) {
  offsets.assign(g.size() + 1, 0);
  for (const auto& e : g.edges) ++offsets[e.tail + 1];
  for (std::size_t i = 0; i < g.size(); ++i) offsets[i + 1] += offsets[i];
  out.resize(g.edges.size());
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& e : g.edges) out[fill[e.tail]++] = {e.head, e.w};
}

VirtualBus::VirtualBus(const Topology& topology, std::uint64_t word_cap, bool trace)
    : VirtualBus(topology, build_bfs_tree(topology, 0), word_cap, trace) {}

VirtualBus::VirtualBus(const Topology& topology, BfsTree tree, std::uint64_t word_cap, bool trace)
    : topo_(topology), tree_(std::move(tree)), word_cap_(word_cap), trace_(trace) {
  metrics_ = RunMetrics::empty(topology);
}

std::vector<Message> VirtualBus::exchange(const std::vector<Post>& posts) {
  std::vector<std::vector<Message>> items(topo_.node_count());
  for (const Post& p : posts) items[p.host].push_back(p.msg);
  BroadcastOptions opt;
  opt.engine.word_cap = word_cap_;
  opt.engine.trace = trace_;
  auto res = pipelined_broadcast(topo_, tree_, items, opt);
  metrics_.append(res.metrics);
  for (const Post& p : posts) ++metrics_.node_broadcasts[p.host];
  ++virtual_rounds_;
  posts_ += posts.size();
  return std::move(res.items);
}

RunMetrics VirtualBus::take_metrics() {
  RunMetrics out = std::move(metrics_);
  metrics_ = RunMetrics::empty(topo_);
  return out;
}

LockstepStats run_lockstep(VirtualBus& bus, const VirtualGraph& g, const std::vector<VirtualProtocol*>& algs) {
  LockstepStats st;
  const std::uint64_t nv = g.size();
  for (auto* a : algs) st.dilation = std::max(st.dilation, a->rounds());
  std::vector<std::size_t> per_node(nv, 0);
  Round before = bus.metrics().rounds;
  std::vector<std::pair<std::uint32_t, Dist>> buf;
  std::vector<VirtualBus::Post> posts;
  for (std::size_t t = 0; t < st.dilation; ++t) {
    posts.clear();
    for (std::size_t i = 0; i < algs.size(); ++i) {
      if (t >= algs[i]->rounds()) continue;
      buf.clear();
      algs[i]->emit(t, buf);
      for (auto [v, val] : buf) {
        posts.push_back({g.host[v], Message::two(i * nv + v, encode_dist(val, bus.word_cap()))});
        ++per_node[v];
      }
    }
    auto got = bus.exchange(posts);
    for (const Message& m : got) {
      std::size_t inst = m[0] / nv;
      auto origin = static_cast<std::uint32_t>(m[0] % nv);
      algs[inst]->receive(t, origin, decode_dist(m[1], bus.word_cap()));
    }
    st.total_broadcasts += got.size();
  }
  for (auto c : per_node) st.broadcasts = std::max(st.broadcasts, c);
  st.network_rounds = bus.metrics().rounds - before;
  return st;
}

}  // namespace dsssp
