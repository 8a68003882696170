#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsssp/common.hpp"
#include "dsssp/topology.hpp"

namespace dsssp {

/// At most two nonnegative integer words.
struct Message {
  std::array<std::uint64_t, 2> words{};
  std::uint8_t size = 0;

  static Message one(std::uint64_t a) { return {{a, 0}, 1}; }
  static Message two(std::uint64_t a, std::uint64_t b) { return {{a, b}, 2}; }
  std::uint64_t operator[](std::size_t i) const { return words[i]; }
  bool operator==(const Message&) const = default;
};

struct Envelope {
  NodeId from;
  std::size_t port;  // receiving node's port the message arrived on
  Message msg;
};

struct TraceEvent {
  std::uint32_t round;  // round the message was sent in
  ChannelId channel;
};

struct RunMetrics {
  Round rounds = 0;
  std::vector<std::uint64_t> edge_messages;    // per directed channel
  std::vector<std::uint64_t> node_broadcasts;  // per node
  std::uint64_t peak_payload = 0;
  std::uint64_t seed = 0;
  std::vector<TraceEvent> trace;  // filled only when tracing is on

  static RunMetrics empty(const Topology& t);

  std::uint64_t max_edge_congestion() const;
  std::uint64_t total_messages() const;
  std::uint64_t per_node_broadcast_max() const;

  /// Appends a run that started right after this one ended.
  void append(const RunMetrics& next);
  /// Adds counters of a concurrently scheduled run; rounds are untouched.
  void add_counts(const RunMetrics& other);
};

void write_metrics_json(std::ostream& os, const RunMetrics& m);
void write_metrics_csv_header(std::ostream& os);
void write_metrics_csv_row(std::ostream& os, const RunMetrics& m);

class Engine;

/// What a node sees while executing one round.
class NodeContext {
 public:
  NodeId self() const { return self_; }
  Round round() const { return round_; }
  std::span<const Envelope> inbox() const { return inbox_; }
  const Topology& topology() const;
  std::size_t degree() const;
  NodeId neighbor(std::size_t port) const;

  void send(std::size_t port, const Message& m);
  /// Same message on every port; counts as one broadcast.
  void broadcast(const Message& m);
  /// Requests a step in round r even without incoming messages.
  void wake_at(Round r);

 private:
  friend class Engine;
  Engine* engine_ = nullptr;
  NodeId self_ = 0;
  Round round_ = 0;
  std::span<const Envelope> inbox_;
};

/// A distributed program. Per-node state lives inside the implementation and
/// is indexed by ctx.self(); a handler may only touch its own node's entries.
class Protocol {
 public:
  virtual ~Protocol() = default;
  /// Round 0. Messages sent here arrive in round 1.
  virtual void init(NodeContext& ctx) { (void)ctx; }
  /// Called in round r >= 1 when the node has mail or asked to be woken.
  virtual void step(NodeContext& ctx) = 0;
  /// Statically known round budget; the reported round count is never
  /// below it, so idle trailing rounds of fixed-length protocols count.
  virtual Round scheduled_rounds() const { return 0; }
};

struct EngineConfig {
  /// Largest admissible message word.
  std::uint64_t word_cap = std::numeric_limits<std::uint64_t>::max();
  Round round_cap = std::numeric_limits<std::uint32_t>::max();
  bool trace = false;
  std::uint64_t seed = 0;
};

/// Word cap for an n-node network with weights up to lambda: large enough for
/// distances up to n*lambda plus the infinity sentinel n*lambda+1, and for
/// node-pair identifiers.
std::uint64_t word_cap_for(std::size_t n, Dist lambda);

/// Wire encoding of a distance; infinity becomes the sentinel n*lambda+1.
std::uint64_t encode_dist(Dist d, std::uint64_t sentinel);
Dist decode_dist(std::uint64_t w, std::uint64_t sentinel);

/// Round-synchronous executor.
class Engine {
 public:
  Engine(const Topology& topology, EngineConfig config);

  RunMetrics run(Protocol& protocol);

 private:
  friend class NodeContext;
  void do_send(NodeId from, std::size_t port, const Message& m);
  void do_wake(NodeId v, Round r);

  const Topology& topo_;
  EngineConfig cfg_;
  Round now_ = 0;
  RunMetrics metrics_;
  std::vector<Round> last_send_;  // per channel, round + 1 of last send
  std::vector<std::vector<Envelope>> next_inbox_;
  std::vector<NodeId> next_active_;
  std::vector<char> next_flag_;
  std::vector<std::pair<Round, NodeId>> wakes_;  // min-heap
};

RunMetrics run_protocol(const Topology& topology, Protocol& protocol, const EngineConfig& config = {});

// ---------------------------------------------------------------------------
// BFS tree

struct BfsTree {
  NodeId root = 0;
  std::vector<NodeId> parent;            // root maps to itself
  std::vector<std::size_t> parent_port;  // port at the child leading to parent
  std::vector<std::vector<std::size_t>> child_ports;
  std::vector<std::size_t> level;
  std::size_t depth = 0;
};

/// Distributed BFS: the root floods, each node adopts the lowest-id sender of
/// the first wave it hears.
BfsTree build_bfs_tree(const Topology& topology, NodeId root, RunMetrics* metrics = nullptr);

/// 2 * depth of the BFS tree rooted at node 0 (at least 1).
std::size_t estimate_diameter(const Topology& topology);
std::size_t estimate_diameter(const BfsTree& tree);

// ---------------------------------------------------------------------------
// Pipelined broadcast over a BFS tree

struct BroadcastResult {
  /// All items in the order the root forwarded them; every node receives
  /// exactly this sequence.
  std::vector<Message> items;
  /// Filled when requested: the sequence each node received.
  std::vector<std::vector<Message>> per_node;
  RunMetrics metrics;
};

struct BroadcastOptions {
  /// When set, all nodes know the item count in advance and no termination
  /// markers are exchanged.
  std::optional<std::size_t> known_count;
  bool collect_per_node = false;
  EngineConfig engine;
};

BroadcastResult pipelined_broadcast(const Topology& topology, const BfsTree& tree,
                                    const std::vector<std::vector<Message>>& items,
                                    const BroadcastOptions& options = {});

// ---------------------------------------------------------------------------
// Scheduling independent instances

/// Environment/config knob for the scheduler's round cap.
std::uint64_t round_cap_multiplier();
void set_round_cap_multiplier(std::uint64_t m);

struct ScheduleResult {
  RunMetrics metrics;  // composite; trace holds the composite send log
  std::vector<Round> delays;
  std::vector<Round> finish;  // per instance
  Round cap = 0;
  Round dilation = 0;
  Round congestion = 0;
};

struct ScheduleOptions {
  std::uint64_t seed = 0;
  /// Declared bounds; measured values are used when zero.
  Round dilation = 0;
  Round congestion = 0;
  bool keep_trace = false;
};

/// Multiplexes independently executed instances onto the network: random
/// start delays in [0, C), per-channel FIFO with one message per round, and
/// each instance's round r+1 starting only after its round-r messages landed.
ScheduleResult schedule_traces(const Topology& topology, const std::vector<const RunMetrics*>& solos,
                               const ScheduleOptions& options);

struct ParallelResult {
  std::vector<RunMetrics> solo;
  ScheduleResult schedule;
};

/// Runs each protocol alone (traced), then schedules them jointly.
ParallelResult schedule_parallel(const Topology& topology, const std::vector<Protocol*>& instances,
                                 const ScheduleOptions& options, const EngineConfig& engine = {});

}  // namespace dsssp
