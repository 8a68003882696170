#include <algorithm>
#include <numeric>
#include <ostream>

#include "json.hpp"

#include "dsssp/congest_sim.hpp"

namespace dsssp {

RunMetrics RunMetrics::empty(const Topology& t) {
  RunMetrics m;
  m.edge_messages.assign(t.channel_count(), 0);
  m.node_broadcasts.assign(t.node_count(), 0);
  return m;
}

std::uint64_t RunMetrics::max_edge_congestion() const {
  return edge_messages.empty() ? 0 : *std::max_element(edge_messages.begin(), edge_messages.end());
}

std::uint64_t RunMetrics::total_messages() const {
  return std::accumulate(edge_messages.begin(), edge_messages.end(), std::uint64_t{0});
}

std::uint64_t RunMetrics::per_node_broadcast_max() const {
  return node_broadcasts.empty() ? 0 : *std::max_element(node_broadcasts.begin(), node_broadcasts.end());
}

void RunMetrics::add_counts(const RunMetrics& other) {
  if (edge_messages.size() < other.edge_messages.size()) edge_messages.resize(other.edge_messages.size(), 0);
  if (node_broadcasts.size() < other.node_broadcasts.size())
    node_broadcasts.resize(other.node_broadcasts.size(), 0);
  for (std::size_t i = 0; i < other.edge_messages.size(); ++i) edge_messages[i] += other.edge_messages[i];
  for (std::size_t i = 0; i < other.node_broadcasts.size(); ++i) node_broadcasts[i] += other.node_broadcasts[i];
  peak_payload = std::max(peak_payload, other.peak_payload);
}

void RunMetrics::append(const RunMetrics& next) {
  add_counts(next);
  if (!next.trace.empty()) {
    if (rounds + next.rounds > std::numeric_limits<std::uint32_t>::max())
      throw RoundCapExceeded("trace round counter overflow");
    trace.reserve(trace.size() + next.trace.size());
    for (TraceEvent e : next.trace) trace.push_back({static_cast<std::uint32_t>(e.round + rounds), e.channel});
  }
  rounds += next.rounds;
}

namespace {

nlohmann::ordered_json metrics_record(const RunMetrics& m) {
  nlohmann::ordered_json j;
  j["rounds"] = m.rounds;
  j["max_edge_congestion"] = m.max_edge_congestion();
  j["total_messages"] = m.total_messages();
  j["per_node_broadcast_max"] = m.per_node_broadcast_max();
  j["seed"] = m.seed;
  return j;
}

}  // namespace

void write_metrics_json(std::ostream& os, const RunMetrics& m) { os << metrics_record(m).dump() << '\n'; }

void write_metrics_csv_header(std::ostream& os) {
  os << "rounds,max_edge_congestion,total_messages,per_node_broadcast_max,seed\n";
}

void write_metrics_csv_row(std::ostream& os, const RunMetrics& m) {
  os << m.rounds << ',' << m.max_edge_congestion() << ',' << m.total_messages() << ','
     << m.per_node_broadcast_max() << ',' << m.seed << '\n';
}

}  // namespace dsssp
