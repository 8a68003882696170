#pragma once

#include <vector>

#include "dsssp/congest_sim.hpp"
#include "dsssp/graph_model.hpp"

namespace dsssp {

struct ShortRangeParams {
  std::int64_t h = 1;
  std::int64_t ell = 1;
  std::int64_t q = 1;

  void validate() const;
  /// l*q + h: last step of the BFS phase on the 1/q grid.
  std::int64_t bfs_steps() const { return ell * q + h; }
  Round rounds() const { return static_cast<Round>(ell * q + 2 * h + 1); }
  std::int64_t bf_budget() const { return h / q; }
};

/// BFS on weights max(w, 1/q) for l*q+h steps, then h rounds of
/// Bellman-Ford in which a node rebroadcasts only a strictly smaller value
/// and at most floor(h/q) times. Weights are handled on the integer grid
/// q*w, with zero-weight edges costing one grid step.
class ShortRangeProtocol : public Protocol {
 public:
  ShortRangeProtocol(const WeightedInstance& inst, NodeId source, const ShortRangeParams& params,
                     std::uint64_t sentinel);

  void init(NodeContext& ctx) override;
  void step(NodeContext& ctx) override;
  Round scheduled_rounds() const override { return params_.rounds(); }

  std::vector<Dist> result() const;
  const std::vector<std::uint32_t>& bfs_broadcasts() const { return bfs_count_; }
  const std::vector<std::uint32_t>& bf_broadcasts() const { return bf_count_; }

 private:
  const WeightedInstance& inst_;
  NodeId source_;
  ShortRangeParams params_;
  std::uint64_t sentinel_;
  std::vector<Dist> scaled_;     // BFS phase value on the 1/q grid
  std::vector<Dist> d_;          // integer value after the floor
  std::vector<Dist> last_sent_;  // last broadcast value on the 1/q grid
  std::vector<std::uint32_t> bfs_count_, bf_count_;
};

struct ShortRangeResult {
  DistanceTable table;
  RunMetrics metrics;
  std::vector<std::uint32_t> bfs_broadcasts;
  std::vector<std::uint32_t> bf_broadcasts;
};

ShortRangeResult short_range(const WeightedInstance& inst, NodeId source, const ShortRangeParams& params,
                             const EngineConfig& cfg = {});

struct ShortRangeManyResult {
  std::vector<DistanceTable> tables;
  RunMetrics metrics;  // composite
  ScheduleResult schedule;
  std::vector<RunMetrics> solo;
};

/// One ShortRange per source, multiplexed with schedule_traces using
/// dilation l*q+2h+2 and congestion |sources|*(1+floor(h/q)).
ShortRangeManyResult short_range_many(const WeightedInstance& inst, const std::vector<NodeId>& sources,
                                      const ShortRangeParams& params, std::uint64_t seed,
                                      const EngineConfig& cfg = {}, bool keep_solo = false);

}  // namespace dsssp
