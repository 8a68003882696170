#include "dsssp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "dsssp/oracle.hpp"
#include "json.hpp"

namespace dsssp {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::bellman_ford_baseline: return "bellman_ford_baseline";
    case Algorithm::main: return "main";
    case Algorithm::multi_source: return "multi_source";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  for (auto a : {Algorithm::bellman_ford_baseline, Algorithm::main, Algorithm::multi_source})
    if (to_string(a) == s) return a;
  if (s == "baseline" || s == "bellman_ford") return Algorithm::bellman_ford_baseline;
  throw ParamError("unknown algorithm '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ParamError("at least one seed is required");
  if (generators.empty() && instance_files.empty()) throw ParamError("no instances configured");
  if (kappa < 1) throw ParamError("kappa must be at least 1");
  if (algorithm != Algorithm::multi_source && kappa != 1) throw ParamError("kappa > 1 needs multi_source");
  if (variant && variant->kind == VariantKind::recursive && !(variant->eps > 0 && variant->eps <= 0.5))
    throw ParamError("recursive variant needs eps in (0, 1/2]");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& spec) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(spec);
  std::string part;
  try {
    while (std::getline(ss, part, ',')) {
      if (part.empty()) continue;
      auto dash = part.find('-');
      if (dash == std::string::npos) {
        out.push_back(std::stoull(part));
      } else {
        std::uint64_t a = std::stoull(part.substr(0, dash)), b = std::stoull(part.substr(dash + 1));
        if (b < a) throw ParamError("empty seed range '" + part + "'");
        for (std::uint64_t x = a; x <= b; ++x) out.push_back(x);
      }
    }
  } catch (const std::logic_error&) {
    throw ParamError("bad seed list '" + spec + "'");
  }
  if (out.empty()) throw ParamError("empty seed list");
  return out;
}

namespace {

json variant_json(const std::optional<VirtualVariant>& v) {
  if (!v) return nullptr;
  return {{"kind", to_string(v->kind)}, {"eps", v->eps}};
}

std::optional<VirtualVariant> variant_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  VirtualVariant v;
  v.kind = variant_from_string(j.at("kind").get<std::string>());
  v.eps = j.value("eps", 0.5);
  return v;
}

std::string describe(const VirtualVariant& v) {
  if (v.kind != VariantKind::recursive) return to_string(v.kind);
  std::ostringstream os;
  os << "recursive(" << std::setprecision(4) << v.eps << ")";
  return os.str();
}

std::string clean(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

struct Digest {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void add(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  std::string hex() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
  }
};

std::vector<NodeId> pick_sources(const WeightedInstance& inst, std::size_t kappa) {
  const std::size_t n = inst.node_count();
  if (kappa > n) throw ParamError("more sources than nodes");
  std::vector<NodeId> out;
  for (NodeId s : inst.sources)
    if (out.size() < kappa && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  for (std::size_t j = 0; out.size() < kappa; ++j) {
    auto v = static_cast<NodeId>((j * n / kappa + j / kappa) % n);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  ExperimentConfig c;
  try {
    json j = json::parse(text);
    for (const auto& g : j.value("generators", json::array())) {
      GeneratorSpec s;
      s.family = family_from_string(g.at("family").get<std::string>());
      s.n = g.at("n").get<std::size_t>();
      s.lambda = g.value("lambda", Dist{16});
      s.seed = g.value("seed", std::uint64_t{1});
      s.symmetric = g.value("symmetric", false);
      c.generators.push_back(s);
    }
    c.instance_files = j.value("instance_files", std::vector<std::string>{});
    c.algorithm = algorithm_from_string(j.value("algorithm", std::string("main")));
    if (j.contains("variant")) c.variant = variant_from_json(j["variant"]);
    c.kappa = j.value("kappa", std::size_t{1});
    if (j.contains("seeds")) {
      if (j["seeds"].is_string())
        c.seeds = parse_seed_list(j["seeds"].get<std::string>());
      else
        c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    }
    c.vary_instance = j.value("vary_instance", true);
    c.oracle_check = j.value("oracle_check", false);
    c.round_cap_multiplier = j.value("round_cap_multiplier", std::uint64_t{0});
    c.out_dir = j.value("out", std::string());
    c.threads = j.value("threads", 1u);
  } catch (const json::exception& e) {
    throw ParamError(std::string("bad experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["generators"] = json::array();
  for (const auto& g : c.generators)
    j["generators"].push_back(
        {{"family", to_string(g.family)}, {"n", g.n}, {"lambda", g.lambda}, {"seed", g.seed}, {"symmetric", g.symmetric}});
  j["instance_files"] = c.instance_files;
  j["algorithm"] = to_string(c.algorithm);
  j["variant"] = variant_json(c.variant);
  j["kappa"] = c.kappa;
  j["seeds"] = c.seeds;
  j["vary_instance"] = c.vary_instance;
  j["oracle_check"] = c.oracle_check;
  j["round_cap_multiplier"] = c.round_cap_multiplier;
  j["out"] = c.out_dir;
  j["threads"] = c.threads;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Records

static const char* kColumns =
    "instance,family,n,d_hat,lambda,kappa,algorithm,variant,seed,rounds,max_edge_congestion,total_messages,"
    "exact_match,error,digest,artifact,wall_time";

void write_csv_header(std::ostream& os) { os << kColumns << '\n'; }

void write_csv_row(std::ostream& os, const ReportRecord& r) {
  os << clean(r.instance) << ',' << clean(r.family) << ',' << r.n << ',' << r.d_hat << ',' << r.lambda << ','
     << r.kappa << ',' << r.algorithm << ',' << r.variant << ',' << r.seed << ',' << r.rounds << ','
     << r.max_edge_congestion << ',' << r.total_messages << ','
     << (r.exact_match ? (*r.exact_match ? "true" : "false") : "") << ',' << clean(r.error) << ',' << r.digest
     << ',' << clean(r.artifact) << ',' << std::fixed << std::setprecision(3) << r.wall_time << '\n';
  os.unsetf(std::ios::floatfield);
}

std::string to_json_line(const ReportRecord& r) {
  json j = {{"instance", r.instance},
            {"family", r.family},
            {"n", r.n},
            {"d_hat", r.d_hat},
            {"lambda", r.lambda},
            {"kappa", r.kappa},
            {"algorithm", r.algorithm},
            {"variant", r.variant},
            {"seed", r.seed},
            {"rounds", r.rounds},
            {"max_edge_congestion", r.max_edge_congestion},
            {"total_messages", r.total_messages},
            {"exact_match", r.exact_match ? json(*r.exact_match) : json(nullptr)},
            {"error", r.error},
            {"digest", r.digest},
            {"artifact", r.artifact},
            {"wall_time", r.wall_time}};
  return j.dump();
}

std::vector<ReportRecord> read_csv(std::istream& is) {
  std::vector<ReportRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != kColumns) throw ParseError(lineno, "unexpected report header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 17) throw ParseError(lineno, "expected 17 columns");
    try {
      ReportRecord r;
      r.instance = f[0];
      r.family = f[1];
      r.n = std::stoull(f[2]);
      r.d_hat = std::stoull(f[3]);
      r.lambda = std::stoll(f[4]);
      r.kappa = std::stoull(f[5]);
      r.algorithm = f[6];
      r.variant = f[7];
      r.seed = std::stoull(f[8]);
      r.rounds = std::stoull(f[9]);
      r.max_edge_congestion = std::stoull(f[10]);
      r.total_messages = std::stoull(f[11]);
      if (f[12] == "true") r.exact_match = true;
      if (f[12] == "false") r.exact_match = false;
      r.error = f[13];
      r.digest = f[14];
      r.artifact = f[15];
      r.wall_time = std::stod(f[16]);
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError(lineno, "malformed number");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Running

ReportRecord run_single(const WeightedInstance& inst, const std::string& name, const std::string& family,
                        Algorithm algorithm, const std::optional<VirtualVariant>& variant, std::size_t kappa,
                        std::uint64_t seed, bool oracle_check) {
  auto start = std::chrono::steady_clock::now();
  ReportRecord r;
  r.instance = name;
  r.family = family;
  r.n = inst.node_count();
  r.lambda = inst.lambda;
  r.kappa = kappa;
  r.algorithm = to_string(algorithm);
  r.seed = seed;
  Digest dg;
  try {
    inst.validate(true);
    EngineConfig cfg;
    cfg.word_cap = word_cap_for(r.n, inst.lambda);
    cfg.seed = seed;
    MainOptions mo;
    mo.seed = seed;
    mo.variant = variant;
    mo.oracle_check = oracle_check;
    RunMetrics metrics;
    std::vector<DistanceTable> tables;
    switch (algorithm) {
      case Algorithm::bellman_ford_baseline: {
        r.d_hat = estimate_diameter(*inst.topology);
        r.variant = "none";
        NodeId s = inst.sources.empty() ? 0 : inst.sources[0];
        auto bf = distributed_bellman_ford(inst, s, cfg);
        metrics = std::move(bf.metrics);
        tables.push_back({s, std::move(bf.dist)});
        if (oracle_check) r.exact_match = tables[0].dist == dijkstra(inst, s).dist;
        break;
      }
      case Algorithm::main: {
        NodeId s = inst.sources.empty() ? 0 : inst.sources[0];
        auto res = main_sssp(inst, s, mo, cfg);
        r.d_hat = res.d_hat;
        r.variant = describe(res.params.variant);
        metrics = std::move(res.metrics);
        tables.push_back(std::move(res.table));
        if (oracle_check) r.exact_match = !res.flagged;
        if (res.flagged) r.error = res.failure;
        break;
      }
      case Algorithm::multi_source: {
        auto res = multi_source_sssp(inst, pick_sources(inst, kappa), mo, cfg);
        r.d_hat = res.d_hat;
        r.variant = describe(res.params.variant);
        metrics = std::move(res.metrics);
        tables = std::move(res.tables);
        bool any = false;
        for (bool f : res.flagged) any = any || f;
        if (oracle_check) r.exact_match = !any;
        if (any) r.error = res.failure;
        break;
      }
    }
    r.rounds = metrics.rounds;
    r.max_edge_congestion = metrics.max_edge_congestion();
    r.total_messages = metrics.total_messages();
    dg.add(metrics.rounds);
    for (auto c : metrics.edge_messages) dg.add(c);
    for (const auto& t : tables) {
      dg.add(t.source);
      for (Dist d : t.dist) dg.add(static_cast<std::uint64_t>(d));
    }
  } catch (const Error& e) {
    r.error = e.what();
    dg.add(0xe0e0);
    for (char c : r.error) dg.add(static_cast<unsigned char>(c));
  }
  r.digest = dg.hex();
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string save_artifact(const std::string& dir, const std::string& stem, const WeightedInstance& inst,
                          const ReplayArtifact& a) {
  try {
    fs::create_directories(dir);
  } catch (const fs::filesystem_error& e) {
    throw IoError(std::string("cannot create ") + dir + ": " + e.what());
  }
  std::string inst_name = stem + ".txt";
  save_instance((fs::path(dir) / inst_name).string(), inst);
  json j = {{"instance", inst_name},
            {"algorithm", to_string(a.algorithm)},
            {"variant", variant_json(a.variant)},
            {"kappa", a.kappa},
            {"seed", a.seed},
            {"oracle_check", a.oracle_check},
            {"digest", a.digest}};
  std::string path = (fs::path(dir) / (stem + ".json")).string();
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os << j.dump(2) << '\n';
  return path;
}

ReplayArtifact load_artifact(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  ReplayArtifact a;
  try {
    json j = json::parse(buf.str());
    fs::path p = j.at("instance").get<std::string>();
    a.instance_path = p.is_absolute() ? p.string() : (fs::path(path).parent_path() / p).string();
    a.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    a.variant = variant_from_json(j.value("variant", json(nullptr)));
    a.kappa = j.value("kappa", std::size_t{1});
    a.seed = j.at("seed").get<std::uint64_t>();
    a.oracle_check = j.value("oracle_check", true);
    a.digest = j.value("digest", std::string());
  } catch (const json::exception& e) {
    throw ParamError(std::string("bad replay artifact: ") + e.what());
  }
  return a;
}

ReportRecord replay(const ReplayArtifact& a) {
  WeightedInstance inst = load_instance(a.instance_path);
  return run_single(inst, fs::path(a.instance_path).stem().string(), "replay", a.algorithm, a.variant, a.kappa, a.seed,
                    a.oracle_check);
}

std::vector<ReportRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.round_cap_multiplier) set_round_cap_multiplier(config.round_cap_multiplier);

  struct Row {
    std::optional<GeneratorSpec> gen;
    std::string file;
    std::uint64_t seed;
  };
  std::vector<Row> rows;
  for (const auto& g : config.generators)
    for (auto s : config.seeds) rows.push_back({g, {}, s});
  for (const auto& f : config.instance_files)
    for (auto s : config.seeds) rows.push_back({std::nullopt, f, s});

  std::vector<ReportRecord> out(rows.size());
  std::atomic<std::size_t> next{0};
  fs::path fail_dir = fs::path(config.out_dir) / "failures";
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      const Row& row = rows[i];
      std::string name, family;
      WeightedInstance inst;
      try {
        if (row.gen) {
          GeneratorSpec g = *row.gen;
          if (config.vary_instance) g.seed = mix_seed(g.seed, row.seed);
          family = to_string(g.family);
          name = family + "_n" + std::to_string(g.n) + "_L" + std::to_string(g.lambda) + "_g" +
                 std::to_string(row.gen->seed) + "_s" + std::to_string(row.seed);
          inst = generate(g);
        } else {
          name = fs::path(row.file).filename().string();
          family = "file";
          inst = load_instance(row.file);
        }
      } catch (const Error& e) {
        out[i].instance = name.empty() ? row.file : name;
        out[i].family = family.empty() ? "file" : family;
        out[i].algorithm = to_string(config.algorithm);
        out[i].seed = row.seed;
        out[i].kappa = config.kappa;
        out[i].error = e.what();
        continue;
      }
      ReportRecord r =
          run_single(inst, name, family, config.algorithm, config.variant, config.kappa, row.seed, config.oracle_check);
      bool failed = !r.error.empty() || (r.exact_match && !*r.exact_match);
      if (failed && !config.out_dir.empty()) {
        ReplayArtifact a{"", config.algorithm, config.variant, config.kappa, row.seed, config.oracle_check, r.digest};
        try {
          r.artifact = save_artifact(fail_dir.string(), name + "_" + to_string(config.algorithm), inst, a);
        } catch (const Error& e) {
          r.error += std::string(" [artifact not saved: ") + e.what() + "]";
        }
      }
      out[i] = std::move(r);
    }
  };
  unsigned threads = std::max(1u, config.threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    std::ofstream csv(fs::path(config.out_dir) / "report.csv");
    std::ofstream jl(fs::path(config.out_dir) / "report.jsonl");
    if (!csv || !jl) throw IoError("cannot write report files in " + config.out_dir);
    write_csv_header(csv);
    for (const auto& r : out) {
      write_csv_row(csv, r);
      jl << to_json_line(r) << '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fits

Fit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ParamError("fit needs paired samples");
  std::vector<double> distinct = x;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 4) throw InsufficientData("need at least 4 distinct n values, got " + std::to_string(distinct.size()));
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw ParamError("log-log fit needs positive values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  Fit f;
  f.points = x.size();
  f.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / m;
  double mean = sy / m, ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = ly[i] - (f.intercept + f.slope * lx[i]);
    ss_res += e * e;
    ss_tot += (ly[i] - mean) * (ly[i] - mean);
  }
  f.r2 = ss_tot > 0 ? 1 - ss_res / ss_tot : 1.0;
  f.regression = f.slope > 0.95;
  return f;
}

std::vector<Fit> complexity_report(const std::vector<ReportRecord>& records) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : records) {
    if (!r.error.empty() || r.rounds == 0) continue;
    std::string variant = r.variant.substr(0, r.variant.find('('));
    auto& g = groups[r.algorithm + "/" + variant + "/" + r.family];
    g.first.push_back(static_cast<double>(r.n));
    g.second.push_back(static_cast<double>(r.rounds));
  }
  std::vector<Fit> out;
  std::string why;
  for (const auto& [key, xy] : groups) {
    try {
      Fit f = fit_loglog(xy.first, xy.second);
      f.group = key;
      out.push_back(f);
    } catch (const InsufficientData& e) {
      why = key + ": " + e.what();
    }
  }
  if (out.empty()) throw InsufficientData(why.empty() ? "no usable records" : why);
  return out;
}

}  // namespace dsssp
