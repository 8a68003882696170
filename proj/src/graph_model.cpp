#include "dsssp/graph_model.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dsssp {

WeightedInstance WeightedInstance::with_weights(std::vector<Dist> w) const {
  WeightedInstance out;
  out.topology = topology;
  out.weights = std::move(w);
  out.lambda = lambda;
  out.sources = sources;
  return out;
}

void WeightedInstance::validate(bool input) const {
  if (!topology) throw InfeasibleSpec("instance has no topology");
  const auto& t = *topology;
  if (weights.size() != t.channel_count()) throw InfeasibleSpec("weight vector size mismatch");
  if (lambda < 1) throw InfeasibleSpec("lambda must be positive");
  double n = static_cast<double>(t.node_count());
  if (static_cast<double>(lambda) > std::max(16.0, n * n * n * n))
    throw InfeasibleSpec("lambda exceeds n^4");
  for (Dist w : weights) {
    if (w < 0) throw InfeasibleSpec("negative weight");
    if (input && (w < 1 || w > lambda)) throw InfeasibleSpec("input weight outside [1, lambda]");
  }
  for (NodeId s : sources)
    if (s >= t.node_count()) throw InfeasibleSpec("source out of range");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::path: return "path";
    case Family::cycle: return "cycle";
    case Family::star_of_paths: return "star_of_paths";
    case Family::erdos_renyi_connected: return "erdos_renyi_connected";
    case Family::low_diameter_expander: return "low_diameter_expander";
    case Family::grid: return "grid";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::path, Family::cycle, Family::star_of_paths, Family::erdos_renyi_connected,
                   Family::low_diameter_expander, Family::grid}) {
    if (to_string(f) == s) return f;
  }
  throw InfeasibleSpec("unknown family '" + s + "'");
}

namespace {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

void add_edge(std::set<std::pair<NodeId, NodeId>>& es, NodeId u, NodeId v) {
  if (u == v) return;
  es.emplace(std::min(u, v), std::max(u, v));
}

std::vector<NodeId> shuffled(std::size_t n, Rng& rng) {
  std::vector<NodeId> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<NodeId>(i);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

}  // namespace

WeightedInstance generate(const GeneratorSpec& spec) {
  if (spec.n < 1) throw InfeasibleSpec("n must be at least 1");
  if (spec.lambda < 1) throw InfeasibleSpec("lambda must be at least 1");
  const std::size_t n = spec.n;
  Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(spec.family) * 1000003 + n));
  std::set<std::pair<NodeId, NodeId>> es;
  // Directed weights fixed by the family, keyed by (tail, head).
  std::vector<std::pair<std::pair<NodeId, NodeId>, Dist>> forced;

  switch (spec.family) {
    case Family::path:
      for (NodeId v = 1; v < n; ++v) add_edge(es, v - 1, v);
      break;
    case Family::cycle:
      if (n < 3) throw InfeasibleSpec("cycle needs n >= 3");
      for (NodeId v = 0; v < n; ++v) add_edge(es, v, static_cast<NodeId>((v + 1) % n));
      break;
    case Family::star_of_paths: {
      // Hub 0 with floor(sqrt n) paths. Outward path edges get the top power
      // of two <= lambda, so every lower bit is zero and scaled iterations
      // see long zero-weight chains.
      std::size_t paths = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(n))));
      Dist top = Dist{1} << (bit_width_at_least_one(static_cast<std::uint64_t>(spec.lambda)) - 1);
      std::size_t rest = n - 1;
      NodeId next = 1;
      for (std::size_t p = 0; p < paths && next < n; ++p) {
        std::size_t len = rest / paths + (p < rest % paths ? 1 : 0);
        NodeId prev = 0;
        for (std::size_t j = 0; j < len; ++j, ++next) {
          add_edge(es, prev, next);
          if (prev != 0) forced.push_back({{prev, next}, top});
          prev = next;
        }
      }
      break;
    }
    case Family::erdos_renyi_connected: {
      auto perm = shuffled(n, rng);
      for (std::size_t i = 1; i < n; ++i) add_edge(es, perm[i], perm[rng.below(i)]);
      double p = n > 1 ? std::min(1.0, 2.0 * std::log(double(n)) / double(n)) : 0.0;
      for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
          if (rng.unit() < p) add_edge(es, u, v);
      break;
    }
    case Family::low_diameter_expander: {
      // Union of three random Hamiltonian cycles.
      if (n <= 3) {
        for (NodeId u = 0; u < n; ++u)
          for (NodeId v = u + 1; v < n; ++v) add_edge(es, u, v);
        break;
      }
      for (int c = 0; c < 3; ++c) {
        auto perm = shuffled(n, rng);
        for (std::size_t i = 0; i < n; ++i) add_edge(es, perm[i], perm[(i + 1) % n]);
      }
      break;
    }
    case Family::grid: {
      std::size_t side = static_cast<std::size_t>(std::llround(std::sqrt(double(n))));
      if (side * side != n) throw InfeasibleSpec("grid needs a square n");
      for (std::size_t r = 0; r < side; ++r)
        for (std::size_t c = 0; c < side; ++c) {
          NodeId v = static_cast<NodeId>(r * side + c);
          if (c + 1 < side) add_edge(es, v, v + 1);
          if (r + 1 < side) add_edge(es, v, static_cast<NodeId>(v + side));
        }
      break;
    }
  }

  EdgeList edges(es.begin(), es.end());
  auto topo = std::make_shared<const Topology>(Topology::from_edges(n, edges));
  WeightedInstance inst;
  inst.topology = topo;
  inst.lambda = spec.lambda;
  inst.weights.assign(topo->channel_count(), 1);
  for (auto [u, v] : edges) {
    Dist a = rng.between(1, spec.lambda);
    Dist b = spec.symmetric ? a : rng.between(1, spec.lambda);
    inst.weights[*topo->find_channel(u, v)] = a;
    inst.weights[*topo->find_channel(v, u)] = b;
  }
  for (auto& [e, w] : forced) {
    inst.weights[*topo->find_channel(e.first, e.second)] = w;
    if (spec.symmetric) inst.weights[*topo->find_channel(e.second, e.first)] = w;
  }
  inst.validate(true);
  return inst;
}

// ---------------------------------------------------------------------------
// Serialization

void write_instance(std::ostream& os, const WeightedInstance& inst) {
  const auto& t = *inst.topology;
  os << t.node_count() << ' ' << t.edge_count() << ' ' << inst.lambda << '\n';
  os << "# sources";
  for (NodeId s : inst.sources) os << ' ' << s;
  os << '\n';
  for (auto [u, v] : t.edges()) {
    os << u << ' ' << v << ' ' << inst.weights[*t.find_channel(u, v)] << ' '
       << inst.weights[*t.find_channel(v, u)] << '\n';
  }
}

namespace {

template <typename T>
T parse_field(std::istringstream& ls, std::size_t line, const char* what) {
  long long x;
  if (!(ls >> x)) throw ParseError(line, std::string("expected ") + what);
  if (x < 0) throw ParseError(line, std::string(what) + " must be nonnegative");
  return static_cast<T>(x);
}

}  // namespace

WeightedInstance read_instance(std::istream& is) {
  std::string text;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t n = 0, m = 0;
  Dist lambda = 1;
  std::vector<NodeId> sources{0};
  struct Row {
    NodeId u, v;
    Dist wuv, wvu;
    std::size_t line;
  };
  std::vector<Row> rows;
  while (std::getline(is, text)) {
    ++lineno;
    if (text.empty()) continue;
    if (text[0] == '#') {
      std::istringstream ls(text.substr(1));
      std::string key;
      ls >> key;
      if (key == "sources") {
        sources.clear();
        long long s;
        while (ls >> s) {
          if (s < 0) throw ParseError(lineno, "negative source id");
          sources.push_back(static_cast<NodeId>(s));
        }
        if (!ls.eof()) throw ParseError(lineno, "malformed sources line");
      }
      continue;
    }
    std::istringstream ls(text);
    if (!have_header) {
      n = parse_field<std::size_t>(ls, lineno, "node count");
      m = parse_field<std::size_t>(ls, lineno, "edge count");
      lambda = parse_field<Dist>(ls, lineno, "lambda");
      have_header = true;
    } else {
      Row r;
      r.u = parse_field<NodeId>(ls, lineno, "u");
      r.v = parse_field<NodeId>(ls, lineno, "v");
      r.wuv = parse_field<Dist>(ls, lineno, "w_uv");
      r.wvu = parse_field<Dist>(ls, lineno, "w_vu");
      r.line = lineno;
      if (r.u >= n || r.v >= n) throw ParseError(lineno, "node id out of range");
      rows.push_back(r);
    }
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing garbage '" + extra + "'");
  }
  if (!have_header) throw ParseError(lineno, "missing header");
  if (rows.size() != m)
    throw ParseError(lineno, "expected " + std::to_string(m) + " edges, found " + std::to_string(rows.size()));
  EdgeList edges;
  edges.reserve(rows.size());
  for (auto& r : rows) edges.emplace_back(r.u, r.v);
  std::shared_ptr<const Topology> topo;
  try {
    topo = std::make_shared<const Topology>(Topology::from_edges(n, edges));
  } catch (const TopologyError& e) {
    throw ParseError(lineno, e.what());
  }
  WeightedInstance inst;
  inst.topology = topo;
  inst.lambda = lambda;
  inst.sources = sources;
  inst.weights.assign(topo->channel_count(), 0);
  for (auto& r : rows) {
    inst.weights[*topo->find_channel(r.u, r.v)] = r.wuv;
    inst.weights[*topo->find_channel(r.v, r.u)] = r.wvu;
  }
  try {
    inst.validate(false);
  } catch (const InfeasibleSpec& e) {
    throw ParseError(lineno, e.what());
  }
  return inst;
}

std::string serialize(const WeightedInstance& inst) {
  std::ostringstream os;
  write_instance(os, inst);
  return os.str();
}

WeightedInstance parse(const std::string& text) {
  std::istringstream is(text);
  return read_instance(is);
}

namespace {

bool is_gzip_path(const std::string& path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

}  // namespace

void save_instance(const std::string& path, const WeightedInstance& inst) {
  std::string text = serialize(inst);
  if (is_gzip_path(path)) {
    gzFile f = gzopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open " + path);
    int wrote = gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
    gzclose(f);
    if (wrote != static_cast<int>(text.size())) throw IoError("short write to " + path);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path);
  os << text;
  if (!os) throw IoError("write failed for " + path);
}

WeightedInstance load_instance(const std::string& path) {
  std::string text;
  if (is_gzip_path(path)) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw IoError("cannot open " + path);
    char buf[1 << 15];
    int got;
    while ((got = gzread(f, buf, sizeof buf)) > 0) text.append(buf, static_cast<std::size_t>(got));
    gzclose(f);
    if (got < 0) throw IoError("corrupt gzip stream in " + path);
  } else {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    text = ss.str();
  }
  return parse(text);
}

}  // namespace dsssp
