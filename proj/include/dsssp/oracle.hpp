#pragma once

#include <vector>

#include "dsssp/common.hpp"
#include "dsssp/graph_model.hpp"

namespace dsssp {

struct Arc {
  NodeId tail;
  NodeId head;
  Dist w;
};

/// Plain weighted digraph in CSR form (out-arcs), used by the sequential
/// oracles and by local computations inside the protocols.
class Digraph {
 public:
  Digraph() = default;
  Digraph(std::size_t n, std::vector<Arc> arcs);
  static Digraph from_instance(const WeightedInstance& inst);

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::size_t arc_count() const { return arcs_.size(); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  /// Out-arcs of u, as [begin, end) indices into arcs().
  std::size_t out_begin(NodeId u) const { return offsets_[u]; }
  std::size_t out_end(NodeId u) const { return offsets_[u + 1]; }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Arc> arcs_;  // sorted by tail
};

struct OracleResult {
  std::vector<Dist> dist;
  /// Fewest hops among minimum-weight paths.
  std::vector<std::size_t> hops;
  /// Predecessor on the canonical (weight, hops)-lexicographic path.
  std::vector<NodeId> parent;
};

OracleResult dijkstra(const Digraph& g, NodeId s);
OracleResult dijkstra(const WeightedInstance& inst, NodeId s);

/// Full Bellman-Ford (n-1 relaxation passes), independent of dijkstra.
std::vector<Dist> bellman_ford(const Digraph& g, NodeId s);

/// d^h(s, .): minimum weight over paths with at most h arcs.
std::vector<Dist> hop_bounded_distances(const Digraph& g, NodeId s, std::size_t h);
std::vector<Dist> hop_bounded_distances(const WeightedInstance& inst, NodeId s, std::size_t h);

/// Unweighted hop distances in the topology.
std::vector<std::size_t> hop_distances(const Topology& t, NodeId s);
std::size_t exact_diameter(const Topology& t);

/// Nodes of the canonical shortest path s -> t, inclusive.
std::vector<NodeId> canonical_path(const OracleResult& r, NodeId s, NodeId t);

}  // namespace dsssp
