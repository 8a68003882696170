#pragma once

#include <functional>
#include <vector>

#include "dsssp/congest_sim.hpp"
#include "dsssp/graph_model.hpp"

namespace dsssp {

/// floor(w / 2^(T-i)): the i most significant of T bits.
Dist weight_prefix(Dist w, int i, int T);

/// floor(log2(lambda)) + 1.
int scaling_iterations(Dist lambda);

/// l_i(u,v) = 2 d(u) + w_i(u,v) - 2 d(v), per directed channel.
std::vector<Dist> reweight(const Topology& t, const std::vector<Dist>& d_prev, const std::vector<Dist>& w_i);

struct ReweightResult {
  std::vector<Dist> weights;
  RunMetrics metrics;
};

/// Every node sends its d value to all neighbours (one round) and both
/// endpoints of each edge then evaluate the reweighting locally.
ReweightResult distributed_reweight(const Topology& t, const std::vector<Dist>& d_prev,
                                    const std::vector<Dist>& w_i, const EngineConfig& cfg);

struct InnerResult {
  std::vector<Dist> dist;
  RunMetrics metrics;
};

/// Solves SSSP on the reweighted instance (whose s-radius is at most n-1).
using InnerSolver = std::function<InnerResult(const WeightedInstance& reweighted, int iteration)>;

struct ScalingStep {
  int iteration;
  int T;
  const std::vector<Dist>& d_prev;
  const std::vector<Dist>& w_i;
  const std::vector<Dist>& ell;
  const std::vector<Dist>& d_ell;  // inner result on ell
};

struct ScalingOptions {
  bool debug_oracle = false;
  std::function<void(const ScalingStep&)> observer;
  EngineConfig engine;
};

struct ScalingResult {
  DistanceTable table;
  RunMetrics metrics;
  int iterations = 0;
};

ScalingResult run_scaling(const WeightedInstance& inst, NodeId s, const InnerSolver& inner,
                          const ScalingOptions& options = {});

/// Distributed Bellman-Ford for n-1 rounds; also the baseline algorithm.
InnerResult distributed_bellman_ford(const WeightedInstance& inst, NodeId s, const EngineConfig& cfg);

}  // namespace dsssp
