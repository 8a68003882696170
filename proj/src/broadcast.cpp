#include <algorithm>
#include <deque>

#include "dsssp/congest_sim.hpp"

namespace dsssp {

namespace {

class BfsProtocol : public Protocol {
 public:
  BfsProtocol(std::size_t n, NodeId root) : root_(root), parent_(n, kNoNode), level_(n, 0) {}

  void init(NodeContext& ctx) override {
    if (ctx.self() != root_) return;
    parent_[root_] = root_;
    ctx.broadcast(Message::one(0));
  }

  void step(NodeContext& ctx) override {
    NodeId v = ctx.self();
    if (parent_[v] != kNoNode) return;
    auto in = ctx.inbox();
    const Envelope* best = &in[0];
    for (const Envelope& e : in)
      if (e.from < best->from) best = &e;
    parent_[v] = best->from;
    level_[v] = ctx.round();
    std::vector<char> heard(ctx.degree(), 0);
    for (const Envelope& e : in) heard[e.port] = 1;
    for (std::size_t p = 0; p < ctx.degree(); ++p)
      if (!heard[p]) ctx.send(p, Message::one(level_[v]));
  }

  NodeId root_;
  std::vector<NodeId> parent_;
  std::vector<std::size_t> level_;
};

}  // namespace

BfsTree build_bfs_tree(const Topology& topology, NodeId root, RunMetrics* metrics) {
  const std::size_t n = topology.node_count();
  if (root >= n) throw TopologyError("BFS root out of range");
  BfsProtocol proto(n, root);
  EngineConfig cfg;
  cfg.word_cap = std::max<std::uint64_t>(n, 1);
  RunMetrics m = run_protocol(topology, proto, cfg);
  BfsTree t;
  t.root = root;
  t.parent = proto.parent_;
  t.level = proto.level_;
  t.parent_port.assign(n, 0);
  t.child_ports.assign(n, {});
  for (NodeId v = 0; v < n; ++v) {
    t.depth = std::max(t.depth, t.level[v]);
    if (v == root) continue;
    t.parent_port[v] = *topology.find_port(v, t.parent[v]);
    t.child_ports[t.parent[v]].push_back(*topology.find_port(t.parent[v], v));
  }
  for (auto& c : t.child_ports) std::sort(c.begin(), c.end());
  if (metrics) *metrics = std::move(m);
  return t;
}

std::size_t estimate_diameter(const BfsTree& tree) { return std::max<std::size_t>(1, 2 * tree.depth); }

std::size_t estimate_diameter(const Topology& topology) {
  return estimate_diameter(build_bfs_tree(topology, 0));
}

// ---------------------------------------------------------------------------

namespace {

// Items travel up to the root in FIFO order and are streamed down from there.
// In self-terminating mode a node reports DONE(count) to its parent once its
// whole subtree has been forwarded, and the root closes the stream with END.
class PipelineProtocol : public Protocol {
 public:
  PipelineProtocol(const BfsTree& tree, const std::vector<std::vector<Message>>& items, bool markers,
                   bool collect)
      : tree_(tree), markers_(markers), collect_(collect) {
    const std::size_t n = tree.parent.size();
    up_.resize(n);
    down_.resize(n);
    done_children_.assign(n, 0);
    subtree_count_.assign(n, 0);
    sent_done_.assign(n, 0);
    end_pending_.assign(n, 0);
    ended_.assign(n, 0);
    received_.assign(n, 0);
    if (collect) per_node_.resize(n);
    for (NodeId v = 0; v < n; ++v) {
      for (const Message& m : items[v]) {
        Message x = markers ? Message::two(m[0], m.size > 1 ? m[1] : 0) : m;
        if (v == tree.root)
          take_at_root(x);
        else
          up_[v].push_back(x);
      }
      subtree_count_[v] = items[v].size();
    }
  }

  void init(NodeContext& ctx) override { act(ctx); }

  void step(NodeContext& ctx) override {
    NodeId v = ctx.self();
    for (const Envelope& e : ctx.inbox()) {
      bool from_parent = v != tree_.root && e.port == tree_.parent_port[v];
      if (from_parent) {
        if (e.msg.size == 1) {
          end_pending_[v] = 1;
        } else {
          deliver(v, e.msg);
          down_[v].push_back(e.msg);
        }
      } else if (e.msg.size == 1) {
        ++done_children_[v];
        subtree_count_[v] += e.msg[0];
      } else if (v == tree_.root) {
        take_at_root(e.msg);
      } else {
        up_[v].push_back(e.msg);
      }
    }
    act(ctx);
  }

  std::vector<Message> stream_;
  std::vector<std::vector<Message>> per_node_;
  std::vector<std::size_t> received_;

 private:
  void take_at_root(const Message& m) {
    stream_.push_back(m);
    down_[tree_.root].push_back(m);
    ++received_[tree_.root];
    if (collect_) per_node_[tree_.root].push_back(m);
  }

  void deliver(NodeId v, const Message& m) {
    ++received_[v];
    if (collect_) per_node_[v].push_back(m);
  }

  void send_down(NodeContext& ctx, const Message& m) {
    for (std::size_t p : tree_.child_ports[ctx.self()]) ctx.send(p, m);
  }

  void act(NodeContext& ctx) {
    NodeId v = ctx.self();
    bool is_root = v == tree_.root;
    bool subtree_done = done_children_[v] == tree_.child_ports[v].size();
    if (!is_root) {
      if (!up_[v].empty()) {
        ctx.send(tree_.parent_port[v], up_[v].front());
        up_[v].pop_front();
      } else if (markers_ && subtree_done && !sent_done_[v]) {
        ctx.send(tree_.parent_port[v], Message::one(subtree_count_[v]));
        sent_done_[v] = 1;
      }
    }
    if (!down_[v].empty()) {
      send_down(ctx, down_[v].front());
      down_[v].pop_front();
    } else if (markers_ && !ended_[v] && (is_root ? subtree_done : end_pending_[v])) {
      send_down(ctx, Message::one(is_root ? subtree_count_[v] : 0));
      ended_[v] = 1;
    }
    bool more = !up_[v].empty() || !down_[v].empty() ||
                (markers_ && !is_root && subtree_done && !sent_done_[v]) ||
                (markers_ && !ended_[v] && (is_root ? subtree_done : end_pending_[v]));
    if (more) ctx.wake_at(ctx.round() + 1);
  }

  const BfsTree& tree_;
  bool markers_;
  bool collect_;
  std::vector<std::deque<Message>> up_;
  std::vector<std::deque<Message>> down_;
  std::vector<std::size_t> done_children_;
  std::vector<std::uint64_t> subtree_count_;
  std::vector<char> sent_done_;
  std::vector<char> end_pending_;
  std::vector<char> ended_;
};

}  // namespace

BroadcastResult pipelined_broadcast(const Topology& topology, const BfsTree& tree,
                                    const std::vector<std::vector<Message>>& items,
                                    const BroadcastOptions& options) {
  const std::size_t n = topology.node_count();
  if (items.size() != n) throw Error("pipelined_broadcast needs one item list per node");
  std::size_t m = 0;
  for (auto& l : items) m += l.size();
  BroadcastResult out;
  if (options.known_count) {
    if (*options.known_count != m) throw ConsistencyError("declared item count does not match");
    if (m == 0) {
      out.metrics = RunMetrics::empty(topology);
      out.metrics.seed = options.engine.seed;
      if (options.collect_per_node) out.per_node.assign(n, {});
      return out;
    }
  }
  PipelineProtocol proto(tree, items, !options.known_count.has_value(), options.collect_per_node);
  out.metrics = run_protocol(topology, proto, options.engine);
  for (NodeId v = 0; v < n; ++v)
    if (proto.received_[v] != m) throw ConsistencyError("pipelined broadcast lost items");
  out.items = std::move(proto.stream_);
  if (options.collect_per_node) out.per_node = std::move(proto.per_node_);
  return out;
}

}  // namespace dsssp
