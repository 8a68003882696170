#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dsssp/common.hpp"

namespace dsssp {

/// Undirected, connected communication graph in CSR form.
///
/// Every undirected edge {u, v} yields two directed channels, u->v and v->u.
/// Channel ids are dense: the channel leaving u through its p-th neighbor is
/// offset(u) + p, so per-channel arrays can be plain vectors.
class Topology {
 public:
  Topology() = default;

  /// Builds and validates (no self-loops, no parallel edges, connected).
  static Topology from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return heads_.size() / 2; }
  std::size_t channel_count() const { return heads_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {heads_.data() + offsets_[v], heads_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  ChannelId channel(NodeId v, std::size_t port) const {
    return static_cast<ChannelId>(offsets_[v] + port);
  }
  ChannelId first_channel(NodeId v) const { return static_cast<ChannelId>(offsets_[v]); }
  NodeId tail(ChannelId c) const { return tails_[c]; }
  NodeId head(ChannelId c) const { return heads_[c]; }
  ChannelId reverse(ChannelId c) const { return reverse_[c]; }
  /// Port index of channel c at its tail.
  std::size_t port_of(ChannelId c) const { return c - offsets_[tails_[c]]; }

  std::optional<std::size_t> find_port(NodeId u, NodeId v) const;
  std::optional<ChannelId> find_channel(NodeId u, NodeId v) const;

  /// Undirected edges with u < v, sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  bool operator==(const Topology& o) const {
    return offsets_ == o.offsets_ && heads_ == o.heads_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> heads_;
  std::vector<NodeId> tails_;
  std::vector<ChannelId> reverse_;
};

}  // namespace dsssp
