#include <algorithm>
#include <cstdlib>
#include <queue>

#include "dsssp/congest_sim.hpp"

namespace dsssp {

namespace {

std::uint64_t& multiplier_slot() {
  static std::uint64_t value = [] {
    const char* env = std::getenv("ROUND_CAP_MULTIPLIER");
    if (env && *env) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{64};
  }();
  return value;
}

struct Group {
  Round round;
  std::size_t begin, end;  // into the instance's sorted trace
};

}  // namespace

std::uint64_t round_cap_multiplier() { return multiplier_slot(); }

void set_round_cap_multiplier(std::uint64_t m) {
  if (m == 0) throw ParamError("round cap multiplier must be positive");
  multiplier_slot() = m;
}

ScheduleResult schedule_traces(const Topology& topology, const std::vector<const RunMetrics*>& solos,
                               const ScheduleOptions& options) {
  const std::size_t k = solos.size();
  ScheduleResult res;
  res.metrics = RunMetrics::empty(topology);
  res.metrics.seed = options.seed;
  if (k == 0) return res;

  std::vector<std::uint64_t> load(topology.channel_count(), 0);
  Round measured_dilation = 0;
  for (const RunMetrics* s : solos) {
    res.metrics.add_counts(*s);
    measured_dilation = std::max(measured_dilation, s->rounds);
    std::uint64_t total = 0;
    for (std::uint64_t c : s->edge_messages) total += c;
    if (total != s->trace.size()) throw Error("schedule_traces needs traced solo runs");
  }
  for (ChannelId c = 0; c < load.size(); ++c) load[c] = res.metrics.edge_messages[c];
  Round measured_congestion = load.empty() ? 0 : *std::max_element(load.begin(), load.end());
  res.dilation = options.dilation ? options.dilation : measured_dilation;
  res.congestion = options.congestion ? options.congestion : measured_congestion;
  Round log_n = std::max(1, ceil_log2(topology.node_count()));
  res.cap = round_cap_multiplier() * (res.dilation + res.congestion) * log_n;

  Rng rng(mix_seed(options.seed, 0x5c4ed));
  res.delays.assign(k, 0);
  if (res.congestion > 1)
    for (auto& d : res.delays) d = rng.below(res.congestion);

  // Split each trace into per-round groups.
  std::vector<std::vector<Group>> groups(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& tr = solos[i]->trace;
    for (std::size_t a = 0; a < tr.size();) {
      std::size_t b = a;
      while (b < tr.size() && tr[b].round == tr[a].round) ++b;
      if (b < tr.size() && tr[b].round < tr[a].round) throw Error("solo trace is not time ordered");
      groups[i].push_back({tr[a].round, a, b});
      a = b;
    }
  }

  using Start = std::pair<Round, std::size_t>;
  std::priority_queue<Start, std::vector<Start>, std::greater<>> starts;
  std::vector<std::size_t> gi(k, 0);
  std::vector<std::size_t> pending(k, 0);
  std::vector<Round> group_start(k, 0);
  res.finish.assign(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (groups[i].empty()) {
      res.finish[i] = res.delays[i] + solos[i]->rounds;
    } else {
      group_start[i] = res.delays[i] + groups[i][0].round;
      starts.emplace(group_start[i], i);
    }
  }

  std::vector<std::vector<std::uint32_t>> queue(topology.channel_count());
  std::vector<std::size_t> head(topology.channel_count(), 0);
  std::vector<ChannelId> active, fresh, still;
  std::vector<char> is_active(topology.channel_count(), 0);
  Round t = starts.empty() ? 0 : starts.top().first;
  while (!starts.empty() || !active.empty()) {
    if (t > res.cap)
      throw RoundCapExceeded("composite schedule exceeded cap " + std::to_string(res.cap));
    while (!starts.empty() && starts.top().first == t) {
      std::size_t i = starts.top().second;
      starts.pop();
      const Group& g = groups[i][gi[i]];
      pending[i] = g.end - g.begin;
      for (std::size_t e = g.begin; e < g.end; ++e) {
        ChannelId c = solos[i]->trace[e].channel;
        queue[c].push_back(static_cast<std::uint32_t>(i));
        if (!is_active[c]) {
          is_active[c] = 1;
          fresh.push_back(c);
        }
      }
    }
    if (!fresh.empty()) {
      std::sort(fresh.begin(), fresh.end());
      std::size_t mid = active.size();
      active.insert(active.end(), fresh.begin(), fresh.end());
      std::inplace_merge(active.begin(), active.begin() + static_cast<std::ptrdiff_t>(mid), active.end());
      fresh.clear();
    }
    still.clear();
    for (ChannelId c : active) {
      std::size_t i = queue[c][head[c]++];
      if (options.keep_trace) {
        if (t > std::numeric_limits<std::uint32_t>::max()) throw RoundCapExceeded("trace overflow");
        res.metrics.trace.push_back({static_cast<std::uint32_t>(t), c});
      }
      if (--pending[i] == 0) {
        Round r = groups[i][gi[i]].round;
        ++gi[i];
        if (gi[i] < groups[i].size()) {
          group_start[i] = t + (groups[i][gi[i]].round - r);
          starts.emplace(group_start[i], i);
        } else {
          res.finish[i] = t + (std::max<Round>(solos[i]->rounds, r + 1) - r);
        }
      }
      if (head[c] == queue[c].size()) {
        queue[c].clear();
        head[c] = 0;
        is_active[c] = 0;
      } else {
        still.push_back(c);
      }
    }
    active.swap(still);
    if (!active.empty())
      ++t;
    else if (!starts.empty())
      t = starts.top().first;
  }
  Round makespan = 0;
  for (Round f : res.finish) makespan = std::max(makespan, f);
  if (makespan > res.cap) throw RoundCapExceeded("composite schedule exceeded cap " + std::to_string(res.cap));
  res.metrics.rounds = makespan;
  return res;
}

ParallelResult schedule_parallel(const Topology& topology, const std::vector<Protocol*>& instances,
                                 const ScheduleOptions& options, const EngineConfig& engine) {
  ParallelResult out;
  EngineConfig cfg = engine;
  cfg.trace = true;
  cfg.seed = options.seed;
  out.solo.reserve(instances.size());
  for (Protocol* p : instances) out.solo.push_back(run_protocol(topology, *p, cfg));
  std::vector<const RunMetrics*> ptrs;
  for (auto& s : out.solo) ptrs.push_back(&s);
  out.schedule = schedule_traces(topology, ptrs, options);
  return out;
}

}  // namespace dsssp
