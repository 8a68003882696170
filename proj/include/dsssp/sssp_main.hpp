#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsssp/approx_sssp.hpp"
#include "dsssp/graph_model.hpp"
#include "dsssp/scaling.hpp"
#include "dsssp/virtual_sssp.hpp"

namespace dsssp {

struct MainParams {
  std::int64_t k = 1;
  std::int64_t h = 1;
  std::int64_t ell = 1;
  std::int64_t q = 1;
  VirtualVariant variant;
  double c_h = 3.0;

  void validate() const;
};

/// Every node joins with probability k/n; s always joins. Sorted.
std::vector<NodeId> sample_virtual_nodes(std::size_t n, double k, NodeId s, std::uint64_t seed);

/// Restricted Bellman-Ford for h rounds: u sends d(u) to v only when
/// d(u) + w(u,v) lies in [i*ell, (i+1)*ell) and differs from what u last sent
/// to v. `last_sent` is per channel and persists across calls.
class ExtendProtocol : public Protocol {
 public:
  ExtendProtocol(const WeightedInstance& inst, std::vector<Dist>& d, std::vector<Dist>& last_sent, std::int64_t h,
                 std::int64_t ell, std::int64_t bucket, bool unrestricted, std::uint64_t sentinel);

  void init(NodeContext& ctx) override;
  void step(NodeContext& ctx) override;
  Round scheduled_rounds() const override { return static_cast<Round>(h_); }

 private:
  void offer(NodeContext& ctx);

  const WeightedInstance& inst_;
  std::vector<Dist>& d_;
  std::vector<Dist>& last_;
  std::int64_t h_, ell_, bucket_;
  bool unrestricted_;
  std::uint64_t sentinel_;
};

/// Runs Extend in place on d. `last_sent` must have one entry per channel
/// (initialised to kInfinity) and is carried across buckets.
RunMetrics extend(const WeightedInstance& inst, std::vector<Dist>& d, std::vector<Dist>& last_sent, std::int64_t h,
                  std::int64_t ell, std::int64_t bucket, const EngineConfig& cfg = {}, bool unrestricted = false);

struct SmallWeightOptions {
  std::uint64_t seed = 1;
  /// Network BFS tree used for all virtual broadcasts.
  const BfsTree* tree = nullptr;
  /// Swap Extend for depth-h Bellman-Ford.
  bool plain_bellman_ford = false;
  /// Oracle distances; when present the bucket invariant is checked after
  /// every bucket and a violation raises ConsistencyError.
  const std::vector<Dist>* check_against = nullptr;
};

struct SmallWeightResult {
  std::vector<Dist> dist;
  RunMetrics metrics;
  std::vector<NodeId> virtual_nodes;
  std::size_t buckets_solved = 0;
  /// Per channel, messages of the bucket virtual solves alone.
  std::vector<std::uint64_t> virtual_edge_messages;
};

/// Exact SSSP on an instance whose s-radius is at most n-1, given an
/// ell-additive estimate approx.
SmallWeightResult small_weight_sssp(const WeightedInstance& inst, NodeId s, const std::vector<Dist>& approx,
                                    const MainParams& params, const SmallWeightOptions& options = {},
                                    const EngineConfig& cfg = {});

enum class ParamRegime { base, gather, virtualizing, multi_source_low };

/// Parameter formulas per regime; all values clamped to >= 1 and k <= n.
MainParams choose_parameters(std::size_t n, std::size_t d_hat, ParamRegime regime, std::size_t kappa = 1,
                             double c_h = 3.0);

/// Regime and virtual variant for n nodes, diameter estimate d_hat and kappa
/// sources, optionally forcing a variant.
MainParams plan_parameters(std::size_t n, std::size_t d_hat, std::size_t kappa,
                           const std::optional<VirtualVariant>& override_variant = std::nullopt, double c_h = 3.0);

struct MainOptions {
  std::uint64_t seed = 1;
  std::optional<VirtualVariant> variant;
  /// Compare with the oracle; a mismatch is flagged, never thrown.
  bool oracle_check = false;
  bool plain_bellman_ford = false;
  double c_h = 3.0;
  std::function<void(const ScalingStep&)> observer;
};

struct MainResult {
  DistanceTable table;
  RunMetrics metrics;
  MainParams params;
  std::size_t d_hat = 0;
  int iterations = 0;
  /// Set when the oracle check found a mismatch or a sub-protocol detected
  /// an inconsistency.
  bool flagged = false;
  std::string failure;
};

MainResult main_sssp(const WeightedInstance& inst, NodeId s, const MainOptions& options = {},
                     const EngineConfig& cfg = {});

struct MultiSourceResult {
  std::vector<DistanceTable> tables;
  RunMetrics metrics;
  MainParams params;
  std::size_t d_hat = 0;
  std::vector<bool> flagged;
  std::string failure;
  /// Per scaling iteration: max over channels of the messages all sources
  /// sent outside the bucket virtual solves (additive SSSP, ShortRange,
  /// Extend).
  std::vector<std::uint64_t> iteration_congestion;
};

/// Exact distances from each source; per-source work is multiplexed with
/// schedule_traces in every scaling iteration.
MultiSourceResult multi_source_sssp(const WeightedInstance& inst, const std::vector<NodeId>& sources,
                                    const MainOptions& options = {}, const EngineConfig& cfg = {});

}  // namespace dsssp
