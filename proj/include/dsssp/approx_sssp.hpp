#pragma once

#include <optional>
#include <vector>

#include "dsssp/graph_model.hpp"
#include "dsssp/virtual_sssp.hpp"

namespace dsssp {

struct Fraction {
  std::int64_t num = 1;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Hop bound h, accuracy eps in (0, 1] and an upper bound on the distances
/// of interest.
struct BoundedHopParams {
  std::int64_t h = 1;
  Fraction eps;
  Dist radius = 1;

  void validate() const;
  /// Number of positive levels, max(1, ceil(log2 radius)).
  int levels() const;
  /// Distance cap of every positive level: h + ceil(2h / eps).
  std::int64_t cap() const;
};

/// Level-i weight max(1, ceil(2 h w / (eps 2^i))) for i >= 1.
Dist level_weight(Dist w, int i, const BoundedHopParams& p);

/// Estimates in units of eps/h: level 0 finds the nodes within h zero-weight
/// hops (estimate 0), level i >= 1 contributes d'_i * 2^(i-1).
struct BoundedHopTable {
  NodeId source = 0;
  std::vector<Dist> units;
};

/// ceil(units * eps / h) as an integer distance (infinity stays infinite).
Dist units_to_dist(Dist units, const BoundedHopParams& p);

/// One level of the bounded-distance search: every node broadcasts once,
/// at time equal to its level distance (or as soon as it learns a smaller
/// one), and stops after `deadline`.
class BoundedDistanceProtocol : public Protocol {
 public:
  BoundedDistanceProtocol(const WeightedInstance& inst, NodeId source, std::vector<Dist> level_weights,
                          Dist cap, Round deadline, std::uint64_t sentinel);

  void init(NodeContext& ctx) override;
  void step(NodeContext& ctx) override;
  Round scheduled_rounds() const override { return deadline_ + 1; }

  const std::vector<Dist>& result() const { return d_; }
  const std::vector<std::uint32_t>& broadcasts() const { return sent_; }

 private:
  const WeightedInstance& inst_;
  NodeId source_;
  std::vector<Dist> w_;  // per channel, kInfinity for excluded edges
  Dist cap_;
  Round deadline_;
  std::uint64_t sentinel_;
  std::vector<Dist> d_;
  std::vector<std::uint32_t> sent_;
};

struct BoundedHopResult {
  std::vector<BoundedHopTable> tables;  // one per source
  RunMetrics metrics;
  /// Largest number of broadcasts by a node within one (source, level) run.
  std::uint32_t max_broadcasts_per_run = 0;
  ScheduleResult schedule;
};

/// All (source, level) runs executed independently and multiplexed.
BoundedHopResult bounded_hop_many(const WeightedInstance& inst, const std::vector<NodeId>& sources,
                                  const BoundedHopParams& params, std::uint64_t seed, const EngineConfig& cfg = {});

BoundedHopResult bounded_hop(const WeightedInstance& inst, NodeId source, const BoundedHopParams& params,
                             const EngineConfig& cfg = {});

struct AdditiveOptions {
  std::uint64_t seed = 1;
  double c_h = 3.0;
  /// Distance bound of the instance; zero means n-1.
  Dist radius = 0;
  /// BFS tree to carry skeleton broadcasts; built (and charged) when absent.
  const BfsTree* tree = nullptr;
};

struct AdditiveResult {
  std::vector<Dist> dist;
  RunMetrics metrics;
  std::vector<NodeId> skeleton;
  BoundedHopParams params;
};

/// Estimates with d <= d~ <= d + alpha for every node within the radius bound.
/// k is the expected skeleton size.
AdditiveResult additive_sssp(const WeightedInstance& inst, NodeId s, Dist alpha, double k,
                             const AdditiveOptions& options = {}, const EngineConfig& cfg = {});

// ---------------------------------------------------------------------------
// Virtual-graph counterparts

class VirtualBoundedDistance : public VirtualProtocol {
 public:
  VirtualBoundedDistance(const VirtualAdjacency& adj, std::size_t n, std::uint32_t source, Dist cap,
                         std::size_t deadline);

  std::size_t rounds() const override { return deadline_ + 1; }
  void emit(std::size_t t, std::vector<std::pair<std::uint32_t, Dist>>& out) override;
  void receive(std::size_t t, std::uint32_t origin, Dist value) override;

  const std::vector<Dist>& result() const { return d_; }

 private:
  const VirtualAdjacency& adj_;
  Dist cap_;
  std::size_t deadline_;
  std::vector<Dist> d_;
  std::vector<char> sent_;
  std::vector<std::pair<Dist, std::uint32_t>> ready_;  // min-heap
};

/// Bounded-hop estimates (in units of eps/h) from each source, all levels in
/// lockstep on the bus.
std::vector<BoundedHopTable> virtual_bounded_hop_many(VirtualBus& bus, const VirtualGraph& g,
                                                      const std::vector<std::uint32_t>& sources,
                                                      const BoundedHopParams& params, LockstepStats* stats = nullptr);

struct VirtualApprox {
  std::vector<Dist> units;
  /// Value of one unit.
  Fraction unit;
  std::size_t skeleton_size = 0;
};

/// (1+eps)-approximate SSSP for nodes within distance `radius`, with a
/// sampled skeleton of expected size k; gathers the whole graph when k is
/// not below |V'|.
VirtualApprox virtual_approx_sssp(VirtualBus& bus, const VirtualGraph& g, Fraction eps, Dist radius, double k,
                                  std::uint64_t seed, double c_h = 3.0);

/// Integer estimates with d <= d~ <= d + ell for nodes within distance r.
std::vector<Dist> virtual_additive_sssp(VirtualBus& bus, const VirtualGraph& g, Dist ell, Dist r, double k,
                                        std::uint64_t seed, double c_h = 3.0);

}  // namespace dsssp
