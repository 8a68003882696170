#pragma once

#include <vector>

#include "dsssp/congest_sim.hpp"
#include "dsssp/oracle.hpp"

namespace dsssp {

/// Virtual node indices are dense in [0, size()).
struct VirtualEdge {
  std::uint32_t tail;
  std::uint32_t head;
  Dist w;
};

/// A weighted digraph over a subset of network nodes. Edge (u, v) is known
/// only to v's host; edges need not exist in the network.
struct VirtualGraph {
  std::vector<NodeId> host;
  std::uint32_t source = 0;
  std::vector<VirtualEdge> edges;
  /// Declared upper bound on the source's radius.
  Dist radius = 0;

  std::size_t size() const { return host.size(); }
  Dist max_weight() const;
  Digraph to_digraph() const;
  void validate() const;
};

/// Global broadcast channel for virtual nodes. Each call to exchange() is one
/// virtual round, realised as a self-terminating pipelined broadcast over a
/// fixed BFS tree; metrics of all rounds accumulate here.
class VirtualBus {
 public:
  VirtualBus(const Topology& topology, std::uint64_t word_cap, bool trace = false);
  VirtualBus(const Topology& topology, BfsTree tree, std::uint64_t word_cap, bool trace = false);

  const Topology& topology() const { return topo_; }
  const BfsTree& tree() const { return tree_; }
  std::size_t diameter_estimate() const { return estimate_diameter(tree_); }

  struct Post {
    NodeId host;
    Message msg;
  };
  /// All posts, in the order every node receives them.
  std::vector<Message> exchange(const std::vector<Post>& posts);

  const RunMetrics& metrics() const { return metrics_; }
  /// Returns and resets the accumulated metrics.
  RunMetrics take_metrics();

  std::uint64_t word_cap() const { return word_cap_; }
  std::size_t virtual_rounds() const { return virtual_rounds_; }
  std::size_t total_posts() const { return posts_; }

 private:
  const Topology& topo_;
  BfsTree tree_;
  RunMetrics metrics_;
  std::uint64_t word_cap_;
  bool trace_;
  std::size_t virtual_rounds_ = 0;
  std::size_t posts_ = 0;
};

/// A broadcast-only algorithm on a virtual graph with a fixed round budget.
/// In each virtual round a node either broadcasts one value to all virtual
/// nodes or stays silent.
class VirtualProtocol {
 public:
  virtual ~VirtualProtocol() = default;
  virtual std::size_t rounds() const = 0;
  /// Appends (virtual node, value) pairs for round t.
  virtual void emit(std::size_t t, std::vector<std::pair<std::uint32_t, Dist>>& out) = 0;
  virtual void receive(std::size_t t, std::uint32_t origin, Dist value) = 0;
};

struct LockstepStats {
  std::size_t dilation = 0;
  /// Largest number of broadcasts by one virtual node over all instances.
  std::size_t broadcasts = 0;
  std::size_t total_broadcasts = 0;
  Round network_rounds = 0;
};

/// Runs independent virtual algorithms side by side, one shared pipelined
/// broadcast per virtual round.
LockstepStats run_lockstep(VirtualBus& bus, const VirtualGraph& g, const std::vector<VirtualProtocol*>& algs);

/// Out-adjacency of a virtual graph, used to apply received broadcasts.
struct VirtualAdjacency {
  explicit VirtualAdjacency(const VirtualGraph& g);
  std::vector<std::size_t> offsets;
  std::vector<std::pair<std::uint32_t, Dist>> out;  // (head, w)
};

}  // namespace dsssp
