#include "dsssp/topology.hpp"

#include <algorithm>
#include <cmath>

namespace dsssp {

std::int64_t ceil_param(double x) {
  double r = std::round(x);
  if (std::fabs(x - r) <= 1e-9 * std::max(1.0, std::fabs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

Topology Topology::from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
  if (n == 0) throw TopologyError("topology needs at least one node");
  std::vector<std::vector<NodeId>> adj(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw TopologyError("edge endpoint out of range");
    if (u == v) throw TopologyError("self-loop at node " + std::to_string(u));
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  Topology t;
  t.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto& a = adj[v];
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end())
      throw TopologyError("parallel edge at node " + std::to_string(v));
    t.offsets_[v + 1] = t.offsets_[v] + a.size();
  }
  t.heads_.reserve(t.offsets_[n]);
  t.tails_.reserve(t.offsets_[n]);
  for (std::size_t v = 0; v < n; ++v) {
    for (NodeId u : adj[v]) {
      t.heads_.push_back(u);
      t.tails_.push_back(static_cast<NodeId>(v));
    }
  }
  t.reverse_.resize(t.heads_.size());
  for (ChannelId c = 0; c < t.heads_.size(); ++c) {
    t.reverse_[c] = *t.find_channel(t.heads_[c], t.tails_[c]);
  }

  // Connectivity.
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u : t.neighbors(v)) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  if (reached != n) throw TopologyError("topology is not connected");
  return t;
}

std::optional<std::size_t> Topology::find_port(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - nb.begin());
}

std::optional<ChannelId> Topology::find_channel(NodeId u, NodeId v) const {
  auto p = find_port(u, v);
  if (!p) return std::nullopt;
  return channel(u, *p);
}

std::vector<std::pair<NodeId, NodeId>> Topology::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count());
  for (ChannelId c = 0; c < heads_.size(); ++c) {
    if (tails_[c] < heads_[c]) out.emplace_back(tails_[c], heads_[c]);
  }
  return out;
}

}  // namespace dsssp
