#pragma once

#include <functional>
#include <vector>

#include "dsssp/short_range.hpp"
#include "dsssp/virtual_graph.hpp"

namespace dsssp {

/// Outcome of a virtual SSSP run; the network cost accumulates in the bus.
struct VirtualResult {
  std::vector<Dist> dist;
  std::size_t virtual_rounds = 0;
  /// Largest number of bus posts by one virtual node.
  std::size_t broadcasts = 0;
  Round network_rounds = 0;
};

/// Each index in [0, n) independently with probability min(1, k/n); `forced`
/// is always included. Sorted.
std::vector<std::uint32_t> sample_subset(std::size_t n, double k, std::uint32_t forced, std::uint64_t seed);

/// Round-by-round queue for radius at most |V'|-1: nodes whose value equals
/// the current threshold i broadcast once; a silent virtual round advances i.
/// With `check_promise`, a node ending beyond the radius raises
/// PromiseViolation.
VirtualResult small_weight_virtual_sssp(VirtualBus& bus, const VirtualGraph& g, bool check_promise = false);

using VirtualSolver = std::function<VirtualResult(const VirtualGraph& g)>;

/// Bit scaling on a virtual graph. Each iteration announces the previous
/// estimates in one virtual round, reweights locally and calls `inner` on a
/// graph of radius at most |V'|-1.
VirtualResult virtual_scaled(VirtualBus& bus, const VirtualGraph& g, const VirtualSolver& inner);

/// Scaling plus the queue: exact SSSP on any virtual graph.
VirtualResult virtual_sssp(VirtualBus& bus, const VirtualGraph& g);

/// Every edge is announced once and each node runs Dijkstra locally.
VirtualResult virtual_sssp_gather(VirtualBus& bus, const VirtualGraph& g);

/// ShortRange on a virtual graph, one bus round per step.
class VirtualShortRange : public VirtualProtocol {
 public:
  VirtualShortRange(const VirtualGraph& g, const VirtualAdjacency& adj, std::uint32_t source,
                    const ShortRangeParams& params);

  std::size_t rounds() const override { return static_cast<std::size_t>(params_.rounds()); }
  void emit(std::size_t t, std::vector<std::pair<std::uint32_t, Dist>>& out) override;
  void receive(std::size_t t, std::uint32_t origin, Dist value) override;

  const std::vector<Dist>& result() const { return d_; }

 private:
  const VirtualAdjacency& adj_;
  std::uint32_t source_;
  ShortRangeParams params_;
  std::vector<Dist> scaled_, d_, last_sent_;
  std::vector<std::uint32_t> bf_count_;
  std::vector<char> bfs_sent_;
};

/// Lockstep ShortRange from each source; one distance vector per source.
std::vector<std::vector<Dist>> virtualized_short_range(VirtualBus& bus, const VirtualGraph& g,
                                                       const std::vector<std::uint32_t>& sources,
                                                       const ShortRangeParams& params,
                                                       LockstepStats* stats = nullptr);

struct NonrecursiveOptions {
  std::uint64_t seed = 1;
  double c_h = 3.0;
  /// Overrides for tests; zero means the default formula.
  double k = 0;
  double q = 0;
};

/// Sampled skeleton, ShortRange from every skeleton node, gather on the
/// skeleton, then a local combination. Falls back to gathering the whole
/// graph when the skeleton would not be smaller.
VirtualResult virtual_sssp_nonrecursive(VirtualBus& bus, const VirtualGraph& g,
                                        const NonrecursiveOptions& options = {});

struct RecursiveOptions {
  std::uint64_t seed = 1;
  double c_h = 3.0;
  /// Zero means ceil(1 / (2 eps)).
  int depth_limit = 0;
};

/// Bucketed recursion for radius g.radius and approximation parameter eps
/// in (0, 1/2]; eps = 1/2 is the nonrecursive algorithm.
VirtualResult virtual_sssp_recursive(VirtualBus& bus, const VirtualGraph& g, double eps,
                                     const RecursiveOptions& options = {});

enum class VariantKind { queue, gather, nonrecursive, recursive };

std::string to_string(VariantKind k);
VariantKind variant_from_string(const std::string& s);

struct VirtualVariant {
  VariantKind kind = VariantKind::queue;
  double eps = 0.5;
};

/// Picks the virtual SSSP strategy for n network nodes, |V'| = n_virtual,
/// diameter estimate d_hat and kappa concurrent sources.
VirtualVariant select_virtual_variant(std::size_t n, std::size_t n_virtual, std::size_t d_hat, std::size_t kappa);

/// Exact SSSP with the chosen variant (scaling applied where the variant
/// needs radius at most |V'|-1).
VirtualResult solve_virtual(VirtualBus& bus, const VirtualGraph& g, const VirtualVariant& variant,
                            std::uint64_t seed);

}  // namespace dsssp
