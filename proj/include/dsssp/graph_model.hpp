#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "dsssp/common.hpp"
#include "dsssp/topology.hpp"

namespace dsssp {

/// A topology plus a nonnegative integer weight for each directed channel.
///
/// Input instances carry weights in [1, lambda]; instances derived by
/// reweighting may contain zeros and exceed lambda.
struct WeightedInstance {
  std::shared_ptr<const Topology> topology;
  std::vector<Dist> weights;  // indexed by ChannelId: weight of tail -> head
  Dist lambda = 1;
  std::vector<NodeId> sources{0};

  std::size_t node_count() const { return topology->node_count(); }
  Dist weight(ChannelId c) const { return weights[c]; }
  /// Weight of the directed edge arriving at v through its port p.
  Dist weight_into(NodeId v, std::size_t port) const {
    return weights[topology->reverse(topology->channel(v, port))];
  }

  /// Same topology, different weights.
  WeightedInstance with_weights(std::vector<Dist> w) const;

  /// Throws InfeasibleSpec on a violated invariant. `input` additionally
  /// requires all weights in [1, lambda].
  void validate(bool input) const;

  bool operator==(const WeightedInstance& o) const {
    return *topology == *o.topology && weights == o.weights && lambda == o.lambda &&
           sources == o.sources;
  }
};

enum class Family { path, cycle, star_of_paths, erdos_renyi_connected, low_diameter_expander, grid };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct GeneratorSpec {
  Family family = Family::erdos_renyi_connected;
  std::size_t n = 16;
  Dist lambda = 16;
  std::uint64_t seed = 1;
  bool symmetric = false;
};

WeightedInstance generate(const GeneratorSpec& spec);

// Text format: header "n m lambda", then one line per undirected edge
// "u v w_uv w_vu" with u < v. Lines starting with '#' are comments, except
// "# sources <ids...>" which lists the source nodes.
void write_instance(std::ostream& os, const WeightedInstance& inst);
WeightedInstance read_instance(std::istream& is);

std::string serialize(const WeightedInstance& inst);
WeightedInstance parse(const std::string& text);

/// File variants; a ".gz" suffix selects gzip compression.
void save_instance(const std::string& path, const WeightedInstance& inst);
WeightedInstance load_instance(const std::string& path);

}  // namespace dsssp
